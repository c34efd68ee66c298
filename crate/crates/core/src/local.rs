//! Block ascent over local channels for objectives of the form
//! `Σ_t w_t Tr[A_t (⊗_k T^{(k)}_{a_k(t)})[ρ]]` with PSD targets `A_t`.
//!
//! Each term is a convex quadratic in the stacked Kraus isometry of any one
//! party, so maximising the linearisation over isometries (a Procrustes
//! problem) never decreases the objective. The damped fallback only guards
//! against round-off.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::linalg::{
    apply_local_kraus, apply_local_left, nearest_isometry, partial_trace_rect, procrustes,
    trace_product_re, CMat,
};
use crate::scenario::{transform_state, Channel};

#[derive(Debug, Clone)]
pub(crate) struct Term {
    /// Channel label used by each party.
    pub labels: Vec<usize>,
    pub target: usize,
    pub weight: f64,
}

/// `families[k][label]`.
pub(crate) type Families = Vec<Vec<Channel>>;

pub(crate) struct LocalObjective<'a> {
    state: &'a CMat,
    in_dims: Vec<usize>,
    terms: Vec<Term>,
    targets: Vec<CMat>,
    /// Per party: terms grouped by the labels of every other party.
    groups: Vec<Vec<Vec<usize>>>,
}

impl<'a> LocalObjective<'a> {
    pub fn new(state: &'a CMat, in_dims: Vec<usize>, terms: Vec<Term>, targets: Vec<CMat>) -> Self {
        let n = in_dims.len();
        let groups = (0..n)
            .map(|k| {
                let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
                for (i, t) in terms.iter().enumerate() {
                    let mut key = t.labels.clone();
                    key.remove(k);
                    map.entry(key).or_default().push(i);
                }
                map.into_values().collect()
            })
            .collect();
        Self {
            state,
            in_dims,
            terms,
            targets,
            groups,
        }
    }

    pub fn set_targets(&mut self, targets: Vec<CMat>) {
        self.targets = targets;
    }

    pub fn value(&self, fams: &Families) -> f64 {
        let vals: Vec<f64> = self
            .terms
            .par_iter()
            .map(|t| {
                let maps: Vec<&Channel> = fams
                    .iter()
                    .zip(&t.labels)
                    .map(|(f, &a)| &f[a])
                    .collect();
                let out = transform_state(self.state, &self.in_dims, &maps);
                t.weight * trace_product_re(&out, &self.targets[t.target])
            })
            .collect();
        vals.iter().sum()
    }

    /// `W_j = Σ_{t: target(t) = j} w_t (⊗T)[ρ]`, so the objective is
    /// `Σ_j Tr[W_j A_j]`.
    pub fn target_weights(&self, fams: &Families) -> Vec<CMat> {
        let outs: Vec<CMat> = self
            .terms
            .par_iter()
            .map(|t| {
                let maps: Vec<&Channel> = fams
                    .iter()
                    .zip(&t.labels)
                    .map(|(f, &a)| &f[a])
                    .collect();
                transform_state(self.state, &self.in_dims, &maps).scale(t.weight)
            })
            .collect();
        let dim = outs.first().map_or(0, |o| o.nrows());
        let mut weights = vec![CMat::zeros(dim, dim); self.targets.len()];
        for (t, out) in self.terms.iter().zip(outs) {
            weights[t.target] += out;
        }
        weights
    }

    /// Gradient blocks `B[label][i] = Σ_t w_t Tr_{¬k}[S_t L_i† A_t]`, each of
    /// shape `dim_in × dim_out`, where `S_t` is ρ with every party but `k`
    /// already transformed.
    fn gradients(&self, fams: &Families, k: usize) -> Vec<Vec<CMat>> {
        let per_group: Vec<Vec<(usize, Vec<CMat>)>> = self.groups[k]
            .par_iter()
            .map(|group| {
                let first = &self.terms[group[0]];
                let mut dims = self.in_dims.clone();
                let mut s = self.state.clone();
                for (j, fam) in fams.iter().enumerate() {
                    if j == k {
                        continue;
                    }
                    let ch = &fam[first.labels[j]];
                    s = apply_local_kraus(&s, &dims, j, ch.kraus());
                    dims[j] = ch.dim_out();
                }
                group
                    .iter()
                    .map(|&ti| {
                        let t = &self.terms[ti];
                        let a = t.labels[k];
                        let ch = &fams[k][a];
                        let mut out_dims = dims.clone();
                        out_dims[k] = ch.dim_out();
                        let target = &self.targets[t.target];
                        let blocks = ch
                            .kraus()
                            .iter()
                            .map(|kr| {
                                let y = apply_local_left(target, &out_dims, k, &kr.adjoint());
                                let x = &s * y;
                                partial_trace_rect(&x, &dims, &out_dims, &[k])
                                    .expect("consistent dimensions")
                                    .scale(t.weight)
                            })
                            .collect();
                        (a, blocks)
                    })
                    .collect()
            })
            .collect();

        let mut grads: Vec<Vec<CMat>> = fams[k]
            .iter()
            .map(|ch| {
                vec![CMat::zeros(ch.dim_in(), ch.dim_out()); ch.rank()]
            })
            .collect();
        for contribs in per_group {
            for (a, blocks) in contribs {
                for (g, b) in grads[a].iter_mut().zip(blocks) {
                    *g += b;
                }
            }
        }
        grads
    }

    /// One Procrustes step for party `k`. Returns the new objective value,
    /// which is never below `current`.
    pub fn ascend_party(&self, fams: &mut Families, k: usize, current: f64) -> f64 {
        let grads = self.gradients(fams, k);
        let old: Vec<Channel> = fams[k].clone();
        let proposals: Vec<CMat> = old
            .iter()
            .zip(&grads)
            .map(|(ch, blocks)| {
                let dout = ch.dim_out();
                let mut wide = CMat::zeros(ch.dim_in(), dout * blocks.len());
                for (i, b) in blocks.iter().enumerate() {
                    wide.columns_mut(i * dout, dout).copy_from(b);
                }
                procrustes(&wide)
            })
            .collect();

        let mut step = 1.0;
        for _ in 0..8 {
            fams[k] = old
                .iter()
                .zip(&proposals)
                .map(|(ch, prop)| {
                    let v = if step == 1.0 {
                        prop.clone()
                    } else {
                        nearest_isometry(&(ch.stacked().scale(1.0 - step) + prop.scale(step)))
                    };
                    Channel::from_isometry_unchecked(&v, ch.dim_out())
                })
                .collect();
            let value = self.value(fams);
            if value >= current {
                return value;
            }
            step *= 0.5;
        }
        fams[k] = old;
        current
    }

    pub fn parties(&self) -> usize {
        self.in_dims.len()
    }
}
