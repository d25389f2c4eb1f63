use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dihedral::{canonical, dihedral_orbit};
use crate::error::{Error, Result};
use crate::key::Key;
use crate::letter::Letter;
use crate::relations::catalog::{catalog, relation_index, Anchor, Relation};
use crate::relations::instance::{context_len, instantiate, RelationInstance};
use crate::rng::stream_rng;
use crate::symbol::Symbol;

/// Uniform redraws allowed per instance before switching to the exact
/// conditional sampler.
pub const RETRY_BUDGET: usize = 1000;

/// Draws `n` instances of `rel` at loop `L` with uniformly random slot and
/// context.
///
/// Multi-term instances must contain a member with nonzero coefficient in
/// `truth`; image relations additionally use each six-element orbit at most
/// once. When [`RETRY_BUDGET`] uniform draws fail for one instance, later
/// draws come from an exact sampler over the supported instances, which has
/// the same distribution as unbounded rejection.
pub fn generate_instances(
    rel: &'static Relation,
    loop_order: usize,
    n: usize,
    truth: &Symbol,
    seed: u64,
) -> Result<Vec<RelationInstance>> {
    if truth.loop_order() != loop_order {
        return Err(Error::InvalidArgument(format!(
            "truth symbol has loop {}, instances requested at loop {loop_order}",
            truth.loop_order()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("instance count must be positive".into()));
    }
    let slots = rel.slots(loop_order);
    if slots.is_empty() {
        return Err(Error::NoNonzeroSupport {
            relation: rel.name().to_string(),
            loop_order,
        });
    }
    let stream = ((relation_index(rel) as u64) << 8) | loop_order as u64;
    let mut rng = stream_rng(seed, stream);
    let ctx_len = context_len(rel, loop_order);
    let is_image = matches!(rel.anchor(), Anchor::Image(_));
    let mut used: HashSet<Key> = HashSet::new();
    let mut fallback: Option<SupportSampler> = None;
    let mut out = Vec::with_capacity(n);

    let uniform = |rng: &mut ChaCha8Rng| -> RelationInstance {
        let slot = rng.gen_range(slots.clone());
        let context: Vec<Letter> = (0..ctx_len)
            .map(|_| Letter::ALL[rng.gen_range(0..6)])
            .collect();
        instantiate(rel, loop_order, slot, &context).expect("drawn slot and context are valid")
    };
    let fresh_orbit = |inst: &RelationInstance, used: &HashSet<Key>| -> Option<Key> {
        let k = inst.members()[0].0;
        let orbit = dihedral_orbit(&k);
        (orbit.len() == 6 && !used.contains(&orbit[0])).then_some(orbit[0])
    };

    while out.len() < n {
        if rel.is_one_term() {
            out.push(uniform(&mut rng));
            continue;
        }
        let mut found = None;
        if fallback.is_none() {
            for _ in 0..RETRY_BUDGET {
                let inst = uniform(&mut rng);
                if !inst.has_nonzero_member(truth) {
                    continue;
                }
                if is_image {
                    match fresh_orbit(&inst, &used) {
                        Some(rep) => {
                            used.insert(rep);
                        }
                        None => continue,
                    }
                }
                found = Some(inst);
                break;
            }
        }
        let inst = match found {
            Some(inst) => inst,
            None => {
                if fallback.is_none() {
                    log::debug!(
                        "{}: uniform draws exhausted at loop {loop_order}, using exact sampler",
                        rel.name()
                    );
                    fallback = Some(SupportSampler::new(rel, loop_order, truth)?);
                }
                let sampler = fallback.as_ref().expect("initialized above");
                if is_image && used.len() >= sampler.orbits {
                    return Err(Error::InsufficientInstances {
                        relation: rel.name().to_string(),
                        requested: n,
                        available: sampler.orbits,
                    });
                }
                loop {
                    let inst = sampler.draw(&mut rng, truth);
                    if is_image {
                        match fresh_orbit(&inst, &used) {
                            Some(rep) => {
                                used.insert(rep);
                            }
                            None => continue,
                        }
                    }
                    break inst;
                }
            }
        };
        out.push(inst);
    }
    Ok(out)
}

/// Generates instances for every catalog relation in parallel.
pub fn generate_catalog(
    loop_order: usize,
    n: usize,
    truth: &Symbol,
    seed: u64,
) -> Vec<(&'static Relation, Result<Vec<RelationInstance>>)> {
    catalog()
        .par_iter()
        .map(|rel| (rel, generate_instances(rel, loop_order, n, truth, seed)))
        .collect()
}

/// Uniform sampler over instances with at least one nonzero member.
///
/// Draws a uniform (nonzero key, member position) incidence, then accepts
/// the resulting instance with probability `1/m`, `m` being its number of
/// nonzero members.
struct SupportSampler {
    rel: &'static Relation,
    loop_order: usize,
    cumulative: Vec<u64>,
    orbits: usize,
}

impl SupportSampler {
    fn new(rel: &'static Relation, loop_order: usize, truth: &Symbol) -> Result<SupportSampler> {
        let counts: Vec<u64> = (0..truth.len())
            .into_par_iter()
            .map(|i| incidences(rel, loop_order, &truth.key_at(i)).len() as u64)
            .collect();
        let mut cumulative = Vec::with_capacity(counts.len());
        let mut acc = 0u64;
        for c in counts {
            acc += c;
            cumulative.push(acc);
        }
        if acc == 0 {
            return Err(Error::NoNonzeroSupport {
                relation: rel.name().to_string(),
                loop_order,
            });
        }
        let orbits = if matches!(rel.anchor(), Anchor::Image(_)) {
            let reps: HashSet<Key> = truth
                .keys()
                .filter(|k| dihedral_orbit(k).len() == 6)
                .map(|k| canonical(&k))
                .collect();
            reps.len()
        } else {
            0
        };
        Ok(SupportSampler {
            rel,
            loop_order,
            cumulative,
            orbits,
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng, truth: &Symbol) -> RelationInstance {
        let total = *self.cumulative.last().expect("nonempty support");
        loop {
            let r = rng.gen_range(0..total);
            let i = self.cumulative.partition_point(|&c| c <= r);
            let before = if i == 0 { 0 } else { self.cumulative[i - 1] };
            let hits = incidences(self.rel, self.loop_order, &truth.key_at(i));
            let (slot, context) = &hits[(r - before) as usize];
            let inst = instantiate(self.rel, self.loop_order, *slot, context)
                .expect("incidences are valid instances");
            let m = inst.keys().filter(|k| truth.contains(k)).count();
            if rng.gen_range(0..m) == 0 {
                return inst;
            }
        }
    }
}

/// Every `(slot, context)` whose instance has `key` as a member, once per
/// member position.
fn incidences(rel: &Relation, loop_order: usize, key: &Key) -> Vec<(usize, Vec<Letter>)> {
    let letters = key.to_letters();
    match rel.anchor() {
        Anchor::Image(g) => {
            vec![
                (1, letters.clone()),
                (1, g.inverse().apply_letters(&letters)),
            ]
        }
        _ => {
            let w = rel.window_len(loop_order);
            let mut out = Vec::new();
            for slot in rel.slots(loop_order) {
                let window = &letters[slot - 1..slot - 1 + w];
                for t in rel.terms() {
                    if t.pattern == window {
                        let mut context = letters[..slot - 1].to_vec();
                        context.extend_from_slice(&letters[slot - 1 + w..]);
                        out.push((slot, context));
                    }
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_symbol;
    use crate::relations::catalog::relation;

    #[test]
    fn deterministic_and_filtered() {
        let truth = builtin_symbol(2).unwrap();
        let rel = relation("final 16").unwrap();
        let a = generate_instances(rel, 2, 50, &truth, 7).unwrap();
        let b = generate_instances(rel, 2, 50, &truth, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        assert!(a.iter().all(|i| i.has_nonzero_member(&truth)));
    }

    #[test]
    fn one_term_relations_skip_filter() {
        let truth = builtin_symbol(2).unwrap();
        let rel = relation("final 0").unwrap();
        let v = generate_instances(rel, 2, 100, &truth, 1).unwrap();
        assert_eq!(v.len(), 100);
        assert!(v.iter().all(|i| truth.get(&i.members()[0].0).is_zero()));
    }

    #[test]
    fn image_relations_use_distinct_orbits() {
        let truth = builtin_symbol(2).unwrap();
        let rel = relation("cycle").unwrap();
        let v = generate_instances(rel, 2, 2, &truth, 3).unwrap();
        let reps: HashSet<Key> = v.iter().map(|i| canonical(&i.members()[0].0)).collect();
        assert_eq!(reps.len(), 2);
        assert!(matches!(
            generate_instances(rel, 2, 3, &truth, 3),
            Err(Error::InsufficientInstances { available: 2, .. })
        ));
    }

    #[test]
    fn unsupported_relation_reports_error() {
        let truth = builtin_symbol(1).unwrap();
        let rel = relation("triple 0").unwrap();
        assert!(matches!(
            generate_instances(rel, 1, 1, &truth, 0),
            Err(Error::NoNonzeroSupport { .. })
        ));
    }

    #[test]
    fn incidences_reconstruct_member() {
        let rel = relation("integ 0").unwrap();
        let key: Key = "abcabd".parse().unwrap();
        for (slot, ctx) in incidences(rel, 3, &key) {
            let inst = instantiate(rel, 3, slot, &ctx).unwrap();
            assert!(inst.keys().any(|k| k == key));
        }
        assert_eq!(incidences(rel, 3, &key).len(), 3);
    }
}
