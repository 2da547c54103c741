//! Named coordinate charts.
//!
//! The construction lives in three explicit charts: the ambient `p` chart
//! (coordinates of weight 1), the orbit-space `u` chart (basic invariants,
//! `u_i` of weight `2i`), and the Saito flat `t` chart (also weight `2i`).
//! Charts may carry extra *parameter* variables of weight 0 (a pencil
//! parameter λ, the invariant-basis parameter c, dual weights x, y, …);
//! parameters never contribute to weighted degrees.

use std::sync::Arc;

use crate::error::{Error, Result};

/// A named coordinate system: ordered variable names with degree weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    /// Chart name, e.g. `p3`, `u3`, `t3`.
    pub name: String,
    /// Ordered variable names.
    pub vars: Vec<String>,
    /// Per-variable weight; coordinates have positive weight, parameters 0.
    pub weights: Vec<i64>,
}

impl Chart {
    /// Build a chart, checking name uniqueness and non-negative weights.
    pub fn new(name: &str, vars: Vec<(String, i64)>) -> Arc<Chart> {
        let mut seen = std::collections::HashSet::new();
        for (v, w) in &vars {
            assert!(seen.insert(v.clone()), "duplicate variable {v}");
            assert!(*w >= 0, "negative weight on {v}");
        }
        Arc::new(Chart {
            name: name.to_string(),
            vars: vars.iter().map(|(v, _)| v.clone()).collect(),
            weights: vars.iter().map(|(_, w)| *w).collect(),
        })
    }

    /// Ambient chart p_1,…,p_n, each of weight 1.
    pub fn p_chart(n: usize) -> Arc<Chart> {
        Chart::new(
            &format!("p{n}"),
            (1..=n).map(|i| (format!("p{i}"), 1)).collect(),
        )
    }

    /// Squared-variable chart q_i = p_i², each of weight 2 (internal).
    pub fn q_chart(n: usize) -> Arc<Chart> {
        Chart::new(
            &format!("q{n}"),
            (1..=n).map(|i| (format!("q{i}"), 2)).collect(),
        )
    }

    /// Orbit-space chart u_1,…,u_n with weight(u_i) = 2i.
    pub fn u_chart(n: usize) -> Arc<Chart> {
        Chart::new(
            &format!("u{n}"),
            (1..=n).map(|i| (format!("u{i}"), 2 * i as i64)).collect(),
        )
    }

    /// Saito flat chart t_1,…,t_n with weight(t_i) = 2i.
    pub fn t_chart(n: usize) -> Arc<Chart> {
        Chart::new(
            &format!("t{n}"),
            (1..=n).map(|i| (format!("t{i}"), 2 * i as i64)).collect(),
        )
    }

    /// Same chart with extra weight-0 parameter variables appended.
    pub fn extended(self: &Arc<Chart>, params: &[&str]) -> Arc<Chart> {
        let mut vars: Vec<(String, i64)> = self
            .vars
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| (v.clone(), *w))
            .collect();
        for p in params {
            vars.push((p.to_string(), 0));
        }
        Chart::new(&format!("{}+{}", self.name, params.join(",")), vars)
    }

    /// Number of variables (including parameters).
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// Indices of the positive-weight (true coordinate) variables.
    pub fn coord_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] > 0).collect()
    }

    /// Look up a variable index by name.
    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string(), self.name.clone()))
    }
}

/// Assert two chart references agree (pointer or structural equality).
pub fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
