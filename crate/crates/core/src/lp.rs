//! Thin wrapper over `minilp` for the small dense linear programs used by
//! polytope construction and support queries.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::geom::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpFailure {
    Infeasible,
    Unbounded,
}

/// Maximizes `objective . x` subject to `normals[i] . x <= offsets[i]`.
/// `extra` appends a nonnegative slack variable `r <= r_max` entering every
/// row with coefficient `extra_coeffs[i]` and the objective with weight 1.
pub(crate) fn maximize(
    normals: &[Point],
    offsets: &[f64],
    objective: &Point,
    slack: Option<(&[f64], f64)>,
) -> Result<(Point, f64), LpFailure> {
    let dim = objective.len();
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..dim)
        .map(|k| problem.add_var(objective[k], (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let r = slack.map(|(_, r_max)| problem.add_var(1.0, (0.0, r_max)));
    for (i, (a, b)) in normals.iter().zip(offsets).enumerate() {
        let mut terms: Vec<(minilp::Variable, f64)> = vars
            .iter()
            .zip(a.iter())
            .filter(|(_, c)| **c != 0.0)
            .map(|(v, c)| (*v, *c))
            .collect();
        if let (Some(r), Some((coeffs, _))) = (r, slack) {
            if coeffs[i] != 0.0 {
                terms.push((r, coeffs[i]));
            }
        }
        if terms.is_empty() {
            if *b < 0.0 {
                return Err(LpFailure::Infeasible);
            }
            continue;
        }
        problem.add_constraint(terms.as_slice(), ComparisonOp::Le, *b);
    }
    match problem.solve() {
        Ok(sol) => {
            let x = Point::from_iterator(dim, vars.iter().map(|v| *sol.var_value(*v)));
            let extra = r.map(|r| *sol.var_value(r)).unwrap_or(0.0);
            Ok((x, extra))
        }
        Err(minilp::Error::Infeasible) => Err(LpFailure::Infeasible),
        Err(minilp::Error::Unbounded) => Err(LpFailure::Unbounded),
    }
}
