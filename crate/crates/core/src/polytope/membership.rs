//! Membership in the convex hull of the 16 deterministic behaviors.
//!
//! Feasibility of `Σ_k w_k v_k = p`, `Σ_k w_k = 1`, `w >= 0` is decided by
//! phase one of the simplex. When infeasible, the phase-one dual gives a
//! hyperplane `f` with `f·v_k <= bound < f·p`. If the behavior violates one
//! of the CHSH expressions, that expression is reported instead, with its
//! bound of 2: a facet of the polytope is the more useful certificate.

use serde::Serialize;

use super::simplex::{feasibility, Phase1};
use super::vertices::{enumerate_vertices, ChshVariant};
use super::PolytopeError;
use crate::behavior::BehaviorTable;

/// Default residual below which a behavior counts as inside, and margin by
/// which an outside certificate must separate.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FacetKind {
    Chsh {
        signs: [[i8; 2]; 2],
    },
    /// Dual hyperplane scaled to unit infinity norm.
    Dual,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Facet {
    pub kind: FacetKind,
    /// Over [`BehaviorTable::flatten`] order.
    pub coefficients: [f64; 16],
    /// `max_k f·v_k` over the 16 vertices.
    pub bound: f64,
    /// `f·p` for the tested behavior.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum MembershipCertificate {
    Inside {
        /// Convex weights of the vertices, in enumeration order.
        weights: [f64; 16],
        /// Largest entrywise error of `Σ w_k v_k` against the behavior.
        reconstruction_error: f64,
    },
    Outside {
        facet: Facet,
    },
}

impl MembershipCertificate {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipCertificate::Inside { .. })
    }

    pub fn facet(&self) -> Option<&Facet> {
        match self {
            MembershipCertificate::Outside { facet } => Some(facet),
            MembershipCertificate::Inside { .. } => None,
        }
    }

    /// Re-checks the certificate against `behavior` from scratch.
    pub fn verify(&self, behavior: &BehaviorTable, tol: f64) -> bool {
        let vertices = enumerate_vertices();
        match self {
            MembershipCertificate::Inside { weights, .. } => {
                let total: f64 = weights.iter().sum();
                weights.iter().all(|w| *w >= 0.0)
                    && (total - 1.0).abs() <= tol
                    && reconstruction_error(weights, &vertices, behavior) <= tol
            }
            MembershipCertificate::Outside { facet } => {
                let value = dot(&facet.coefficients, &behavior.flatten());
                vertices
                    .iter()
                    .all(|v| dot(&facet.coefficients, &v.flatten()) <= facet.bound)
                    && value > facet.bound + tol
            }
        }
    }
}

fn dot(f: &[f64; 16], p: &[f64; 16]) -> f64 {
    f.iter().zip(p).map(|(a, b)| a * b).sum()
}

fn reconstruction_error(
    weights: &[f64; 16],
    vertices: &[BehaviorTable],
    behavior: &BehaviorTable,
) -> f64 {
    let mut mix = [0.0; 16];
    for (w, v) in weights.iter().zip(vertices) {
        for (m, e) in mix.iter_mut().zip(v.flatten()) {
            *m += w * e;
        }
    }
    mix.iter()
        .zip(behavior.flatten())
        .map(|(m, p)| (m - p).abs())
        .fold(0.0, f64::max)
}

fn facet_from(
    kind: FacetKind,
    coefficients: [f64; 16],
    behavior: &BehaviorTable,
    vertices: &[BehaviorTable],
) -> Facet {
    let bound = vertices
        .iter()
        .map(|v| dot(&coefficients, &v.flatten()))
        .fold(f64::NEG_INFINITY, f64::max);
    Facet {
        kind,
        coefficients,
        bound,
        value: dot(&coefficients, &behavior.flatten()),
    }
}

/// Decides membership and returns a self-checked certificate.
pub fn membership(
    behavior: &BehaviorTable,
    tol: f64,
) -> Result<MembershipCertificate, PolytopeError> {
    let vertices = enumerate_vertices();
    let columns: Vec<[f64; 16]> = vertices.iter().map(BehaviorTable::flatten).collect();
    let mut a: Vec<Vec<f64>> = (0..16)
        .map(|i| columns.iter().map(|v| v[i]).collect())
        .collect();
    a.push(vec![1.0; 16]);
    let mut b = behavior.flatten().to_vec();
    b.push(1.0);

    let certificate = match feasibility(&a, &b, tol)? {
        Phase1::Feasible { w, .. } => {
            let mut weights = [0.0; 16];
            for (slot, v) in weights.iter_mut().zip(&w) {
                *slot = v.max(0.0);
            }
            let total: f64 = weights.iter().sum();
            for v in weights.iter_mut() {
                *v /= total;
            }
            MembershipCertificate::Inside {
                reconstruction_error: reconstruction_error(&weights, &vertices, behavior),
                weights,
            }
        }
        Phase1::Infeasible { farkas, .. } => {
            let best_chsh = ChshVariant::all()
                .into_iter()
                .map(|v| (v.value(behavior), v))
                .fold(None, |acc: Option<(f64, ChshVariant)>, (s, v)| match acc {
                    Some((t, _)) if t >= s => acc,
                    _ => Some((s, v)),
                });
            let facet = match best_chsh {
                Some((s, v)) if s > 2.0 + tol => facet_from(
                    FacetKind::Chsh { signs: v.signs },
                    v.coefficients(),
                    behavior,
                    &vertices,
                ),
                _ => {
                    let mut f = [0.0; 16];
                    f.copy_from_slice(&farkas[..16]);
                    let scale = f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                    if scale == 0.0 || !scale.is_finite() {
                        return Err(PolytopeError::IllConditioned(
                            "phase-one dual vanished on an infeasible problem".into(),
                        ));
                    }
                    f.iter_mut().for_each(|v| *v /= scale);
                    facet_from(FacetKind::Dual, f, behavior, &vertices)
                }
            };
            MembershipCertificate::Outside { facet }
        }
    };
    if !certificate.verify(behavior, tol) {
        return Err(PolytopeError::IllConditioned(format!(
            "certificate failed its own check: {certificate:?}"
        )));
    }
    Ok(certificate)
}
