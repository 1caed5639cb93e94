//! Simulation of distributed generation engines.
//!
//! Each engine only ever sees a work item `(seed, q, id_seg)` plus the fixed
//! profile constants (len, w, XOF config). The assembled result must equal
//! the serial client-side MRP bit for bit, whatever the schedule.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::xof::{encode_domain_input, Seed};

use super::generate::assemble_limb;
use super::{gen_seg, generate_mrp, GenParams, Segment, XofConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Engines pull items from a shared, shuffled queue.
    WorkStealing { shuffle_seed: u64 },
    /// Items are shuffled, then dealt to engines in turn.
    RoundRobin { shuffle_seed: u64 },
    /// Contiguous chunks of the natural (q, id_seg) order.
    Chunked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct WorkItem {
    limb: usize,
    q: u32,
    id_seg: u16,
}

/// The only state an engine holds besides its work item.
#[derive(Clone, Copy, Debug)]
struct EngineProfile {
    len: usize,
    w: u32,
    xof: XofConfig,
}

impl EngineProfile {
    fn run(&self, seed: &Seed, item: WorkItem) -> Result<Segment> {
        let input = encode_domain_input(seed, item.q, item.id_seg);
        gen_seg(&input, item.q, self.len, self.w, self.xof)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub engines: usize,
    pub work_items: usize,
    pub items_per_engine: Vec<usize>,
    pub identical: bool,
    /// Limbs (by modulus) whose assembled coefficients differ from serial.
    pub mismatched_limbs: Vec<u32>,
}

/// Runs every `(q, id_seg)` item of the MRP on `engine_count` concurrent
/// workers under `schedule` and compares the assembled polynomial with
/// [`generate_mrp`].
pub fn verify_distributed_equivalence(
    seed: &Seed,
    params: &GenParams,
    engine_count: usize,
    schedule: Schedule,
) -> Result<EquivalenceReport> {
    if engine_count == 0 {
        return Err(Error::invalid("engine_count must be at least 1"));
    }
    let serial = generate_mrp(seed, params)?;

    let mut items: Vec<WorkItem> = params
        .base
        .iter()
        .enumerate()
        .flat_map(|(limb, &q)| {
            (0..params.n_seg).map(move |id| WorkItem {
                limb,
                q,
                id_seg: id as u16,
            })
        })
        .collect();

    let assignment: Vec<Vec<WorkItem>> = match schedule {
        Schedule::WorkStealing { shuffle_seed } => {
            items.shuffle(&mut StdRng::seed_from_u64(shuffle_seed));
            Vec::new()
        }
        Schedule::RoundRobin { shuffle_seed } => {
            items.shuffle(&mut StdRng::seed_from_u64(shuffle_seed));
            let mut lanes = vec![Vec::new(); engine_count];
            for (i, item) in items.iter().enumerate() {
                lanes[i % engine_count].push(*item);
            }
            lanes
        }
        Schedule::Chunked => items
            .chunks(items.len().div_ceil(engine_count).max(1))
            .map(<[WorkItem]>::to_vec)
            .chain(std::iter::repeat(Vec::new()))
            .take(engine_count)
            .collect(),
    };

    let profile = EngineProfile {
        len: params.len,
        w: params.w,
        xof: XofConfig {
            backend: params.backend,
            r: params.r,
        },
    };
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, WorkItem, Result<Segment>)>();

    std::thread::scope(|s| {
        for engine in 0..engine_count {
            let tx = tx.clone();
            let items = &items;
            let next = &next;
            let lane = assignment.get(engine).cloned();
            let seed = *seed;
            s.spawn(move || {
                let mut jitter = StdRng::seed_from_u64(engine as u64);
                let mut run = |item: WorkItem| {
                    if jitter.gen_ratio(1, 4) {
                        std::thread::yield_now();
                    }
                    let _ = tx.send((engine, item, profile.run(&seed, item)));
                };
                match lane {
                    Some(lane) => lane.into_iter().for_each(&mut run),
                    None => loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        match items.get(i) {
                            Some(&item) => run(item),
                            None => break,
                        }
                    },
                }
            });
        }
    });
    drop(tx);

    let mut slots: Vec<Vec<Option<Segment>>> = vec![vec![None; params.n_seg]; params.base.len()];
    let mut items_per_engine = vec![0usize; engine_count];
    for (engine, item, seg) in rx {
        items_per_engine[engine] += 1;
        let slot = &mut slots[item.limb][item.id_seg as usize];
        if slot.replace(seg?).is_some() {
            return Err(Error::invalid(format!(
                "work item (q={}, id_seg={}) executed twice",
                item.q, item.id_seg
            )));
        }
    }

    let mut mismatched_limbs = Vec::new();
    for (limb_idx, segs) in slots.into_iter().enumerate() {
        let q = params.base[limb_idx];
        let segs: Option<Vec<Segment>> = segs.into_iter().collect();
        let same = match segs {
            Some(segs) => assemble_limb(q, segs, params)
                .map(|limb| Some(&limb) == serial.limb(q))
                .unwrap_or(false),
            None => false,
        };
        if !same {
            mismatched_limbs.push(q);
        }
    }

    Ok(EquivalenceReport {
        engines: engine_count,
        work_items: items.len(),
        items_per_engine,
        identical: mismatched_limbs.is_empty(),
        mismatched_limbs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_engine_is_serial() {
        let params = GenParams::desk(256, 32, vec![7681, 12289]);
        let report =
            verify_distributed_equivalence(&Seed::ZERO, &params, 1, Schedule::Chunked).unwrap();
        assert!(report.identical);
        assert_eq!(report.items_per_engine, vec![16]);
    }

    #[test]
    fn more_engines_than_items() {
        let params = GenParams::desk(64, 32, vec![7681]);
        for schedule in [
            Schedule::Chunked,
            Schedule::RoundRobin { shuffle_seed: 3 },
            Schedule::WorkStealing { shuffle_seed: 3 },
        ] {
            let r = verify_distributed_equivalence(&Seed::ZERO, &params, 5, schedule).unwrap();
            assert!(r.identical);
            assert_eq!(r.items_per_engine.iter().sum::<usize>(), 2);
        }
    }

    #[test]
    fn zero_engines_rejected() {
        let params = GenParams::desk(64, 32, vec![7681]);
        assert!(verify_distributed_equivalence(&Seed::ZERO, &params, 0, Schedule::Chunked).is_err());
    }
}
