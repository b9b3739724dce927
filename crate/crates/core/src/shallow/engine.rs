use std::collections::BTreeMap;

use rand::Rng;

use super::plan::{ChainPlan, Step};
use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat4, C64, ZERO};
use crate::par::{inverse_cdf, map_slice, sample_chunked};
use crate::Execution;

/// Local values of up to four elements: bits, or photon counts.
pub(crate) type Key = [u8; 4];

/// Amplitudes below this modulus are dropped.
const PRUNE: f64 = 1e-15;

/// Sparse state of the elements of one slot, in slot order.
#[derive(Clone, Debug, Default)]
pub(crate) struct Cluster {
    pub amps: Vec<(Key, C64)>,
}

impl Cluster {
    pub fn basis(values: &[u8]) -> Self {
        let mut k = [0; 4];
        k[..values.len()].copy_from_slice(values);
        Self {
            amps: vec![(k, C64::new(1.0, 0.0))],
        }
    }

    fn tensor(&self, other: &Cluster, offset: usize) -> Cluster {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for (ka, a) in &self.amps {
            for (kb, b) in &other.amps {
                let mut k = *ka;
                k[offset..4].copy_from_slice(&kb[..4 - offset]);
                amps.push((k, a * b));
            }
        }
        Cluster { amps }
    }

    fn collect(map: BTreeMap<Key, C64>) -> Cluster {
        Cluster {
            amps: map.into_iter().filter(|(_, a)| a.norm() > PRUNE).collect(),
        }
    }
}

/// Operation applied to the measured elements of a step, or to a layer-1 group.
#[derive(Clone, Debug)]
pub(crate) enum LocalOp {
    Identity,
    Qubit1(Mat2),
    /// Acts on `(first, second)` measured elements, index `2·b_0 + b_1`.
    Qubit2(Mat4),
    /// `table[total][n_0][k]`: amplitude of `|k, total − k⟩` from `|n_0, total − n_0⟩`.
    Modes2(Vec<Vec<Vec<C64>>>),
}

impl LocalOp {
    pub fn apply(&self, state: &Cluster, pos: &[usize]) -> Cluster {
        let mut out: BTreeMap<Key, C64> = BTreeMap::new();
        match self {
            LocalOp::Identity => return state.clone(),
            LocalOp::Qubit1(m) => {
                let p = pos[0];
                for (k, a) in &state.amps {
                    for w in 0..2u8 {
                        let mut k2 = *k;
                        k2[p] = w;
                        *out.entry(k2).or_insert(ZERO) += m.0[w as usize][k[p] as usize] * a;
                    }
                }
            }
            LocalOp::Qubit2(m) => {
                let (p, q) = (pos[0], pos[1]);
                for (k, a) in &state.amps {
                    let col = 2 * k[p] as usize + k[q] as usize;
                    for row in 0..4 {
                        let mut k2 = *k;
                        k2[p] = (row >> 1) as u8;
                        k2[q] = (row & 1) as u8;
                        *out.entry(k2).or_insert(ZERO) += m.0[row][col] * a;
                    }
                }
            }
            LocalOp::Modes2(table) => {
                let (p, q) = (pos[0], pos[1]);
                for (k, a) in &state.amps {
                    let total = (k[p] + k[q]) as usize;
                    let row = &table[total][k[p] as usize];
                    for (n0, c) in row.iter().enumerate() {
                        let mut k2 = *k;
                        k2[p] = n0 as u8;
                        k2[q] = (total - n0) as u8;
                        *out.entry(k2).or_insert(ZERO) += c * a;
                    }
                }
            }
        }
        Cluster::collect(out)
    }
}

/// Bounds checked while stepping: stored slots may hold at most
/// `stored_cap` per element and a step's measured group `measured_cap` in
/// total.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OccupancyLimits {
    pub stored_cap: u8,
    pub measured_cap: u8,
}

/// Largest values seen by the runtime monitor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OccupancyStats {
    /// Largest per-element value in a stored conditional state.
    pub max_stored: u8,
    /// Largest total over a measured group.
    pub max_measured: u8,
}

impl OccupancyStats {
    fn merge(self, o: OccupancyStats) -> OccupancyStats {
        OccupancyStats {
            max_stored: self.max_stored.max(o.max_stored),
            max_measured: self.max_measured.max(o.max_measured),
        }
    }
}

/// A planned circuit with its initial slot states and per-step operations.
pub(crate) struct Model {
    pub plan: ChainPlan,
    /// State of each layer-1 group after its gate.
    pub initial: Vec<Cluster>,
    /// Operation of each layer-2 group, before measurement.
    pub ops: Vec<LocalOp>,
    pub limits: OccupancyLimits,
}

/// What to do with each element's outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    /// Reported at this register position.
    Output(usize),
    /// Required value.
    Post(u8),
    Ignored,
}

/// Live derived slots: at most two per chain at any time.
#[derive(Clone, Default)]
struct Store(Vec<(usize, Cluster)>);

impl Store {
    fn take(&mut self, slot: usize) -> Cluster {
        let i = self.0.iter().position(|(s, _)| *s == slot).expect("slot written before it is read");
        self.0.swap_remove(i).1
    }

    fn put(&mut self, slot: usize, width: usize, c: Cluster) {
        if width > 0 {
            self.0.push((slot, c));
        }
    }
}

struct Branch {
    outcome: Key,
    probability: f64,
}

impl Model {
    fn check_stored(&self, c: &Cluster, width: usize, stats: &mut OccupancyStats) -> Result<()> {
        for (k, _) in &c.amps {
            for &v in &k[..width] {
                if v > self.limits.stored_cap {
                    return Err(Error::Occupancy(format!(
                        "a stored element holds {v} > {}",
                        self.limits.stored_cap
                    )));
                }
                stats.max_stored = stats.max_stored.max(v);
            }
        }
        Ok(())
    }

    /// Joint state of the step's read slots with its operation applied, and
    /// the outcome distribution over its measured elements in lexicographic
    /// order of ascending element index.
    fn prepare(
        &self,
        step: &Step,
        derived: &mut Store,
        stats: &mut OccupancyStats,
    ) -> Result<(Cluster, Vec<Branch>)> {
        let first = self.plan.first.len();
        let mut joint: Option<Cluster> = None;
        let mut width = 0;
        for &r in &step.reads {
            let c = if r < first {
                self.initial[r].clone()
            } else {
                derived.take(r)
            };
            joint = Some(match joint {
                None => c,
                Some(j) => j.tensor(&c, width),
            });
            width += self.plan.slots[r].len();
        }
        let joint = self.ops[step.group].apply(&joint.unwrap_or_default(), &step.measured_pos);

        let mut ascending: Vec<usize> = (0..step.measured.len()).collect();
        ascending.sort_by_key(|&i| step.measured[i]);
        let mut probs: BTreeMap<Key, f64> = BTreeMap::new();
        for (k, a) in &joint.amps {
            let mut sorted = [0u8; 4];
            let mut total = 0u8;
            for (slot, &i) in ascending.iter().enumerate() {
                sorted[slot] = k[step.measured_pos[i]];
                total += k[step.measured_pos[i]];
            }
            if total > self.limits.measured_cap {
                return Err(Error::Occupancy(format!(
                    "measured group {:?} holds {total} > {}",
                    step.measured, self.limits.measured_cap
                )));
            }
            stats.max_measured = stats.max_measured.max(total);
            *probs.entry(sorted).or_default() += a.norm_sqr();
        }
        let branches = probs
            .into_iter()
            .map(|(sorted, probability)| {
                let mut outcome = [0u8; 4];
                for (slot, &i) in ascending.iter().enumerate() {
                    outcome[i] = sorted[slot];
                }
                Branch { outcome, probability }
            })
            .collect();
        Ok((joint, branches))
    }

    /// Conditional state of the unmeasured elements given `outcome`.
    fn project(&self, step: &Step, joint: &Cluster, outcome: &Key, probability: f64) -> Cluster {
        let scale = 1.0 / probability.sqrt();
        let amps = joint
            .amps
            .iter()
            .filter(|(k, _)| step.measured_pos.iter().enumerate().all(|(i, &p)| k[p] == outcome[i]))
            .map(|(k, a)| {
                let mut k2 = [0u8; 4];
                for (i, &p) in step.kept_pos.iter().enumerate() {
                    k2[i] = k[p];
                }
                (k2, a * scale)
            })
            .collect();
        Cluster { amps }
    }

    fn check_initial(&self) -> Result<OccupancyStats> {
        let mut stats = OccupancyStats::default();
        for (c, g) in self.initial.iter().zip(&self.plan.first) {
            self.check_stored(c, g.len(), &mut stats)?;
        }
        Ok(stats)
    }

    /// Walks the plan once per shot and maps each full outcome (indexed by
    /// element) through `keep`.
    pub fn sample<T, F>(&self, shots: usize, seed: u64, exec: Execution, keep: F) -> Result<(Vec<T>, OccupancyStats)>
    where
        T: Send,
        F: Fn(&[u8]) -> Option<T> + Sync + Send,
    {
        let base = self.check_initial()?;
        let runs = sample_chunked(exec, shots, seed, |rng, n| {
            let mut stats = base;
            let mut values = vec![0u8; self.plan.elements];
            let mut derived = Store::default();
            let mut kept = Vec::with_capacity(n);
            for _ in 0..n {
                for step in self.plan.steps() {
                    let (joint, branches) = match self.prepare(step, &mut derived, &mut stats) {
                        Ok(x) => x,
                        Err(e) => return vec![Err(e)],
                    };
                    let mut acc = 0.0;
                    let cdf: Vec<f64> = branches
                        .iter()
                        .map(|b| {
                            acc += b.probability;
                            acc
                        })
                        .collect();
                    let b = &branches[inverse_cdf(&cdf, rng.random::<f64>() * acc)];
                    for (i, &e) in step.measured.iter().enumerate() {
                        values[e] = b.outcome[i];
                    }
                    let post = self.project(step, &joint, &b.outcome, b.probability);
                    if let Err(e) = self.check_stored(&post, step.kept_pos.len(), &mut stats) {
                        return vec![Err(e)];
                    }
                    derived.put(step.writes, step.kept_pos.len(), post);
                }
                kept.push(Ok((keep(&values), stats)));
            }
            kept
        });
        let mut out = Vec::new();
        let mut stats = base;
        for r in runs {
            match r {
                Ok((Some(t), s)) => {
                    stats = stats.merge(s);
                    out.push(t);
                }
                Ok((None, s)) => stats = stats.merge(s),
                Err(e) => return Err(e),
            }
        }
        Ok((out, stats))
    }

    /// Exact distribution over the `k` register positions given by `roles`,
    /// with the postselected mass as success probability. Chains are
    /// enumerated depth-first and combined as a product.
    pub fn exact(
        &self,
        roles: &[Role],
        k: usize,
        cap: u128,
        exec: Execution,
    ) -> Result<(Vec<(Vec<u8>, f64)>, f64, OccupancyStats)> {
        let base = self.check_initial()?;
        let per_chain = map_slice(exec, &self.plan.chains, |chain| {
            let positions: Vec<usize> = chain
                .elements
                .iter()
                .filter_map(|&e| match roles[e] {
                    Role::Output(p) => Some(p),
                    _ => None,
                })
                .collect();
            let mut dfs = Dfs {
                model: self,
                steps: &chain.steps,
                roles,
                cap,
                leaves: 0,
                stats: base,
                values: vec![0u8; k],
                positions: &positions,
                out: BTreeMap::new(),
            };
            dfs.walk(0, &mut Store::default(), 1.0)?;
            let (out, stats) = (dfs.out, dfs.stats);
            Ok::<_, Error>((positions, out, stats))
        });

        let mut stats = base;
        let mut joint: Vec<(Vec<u8>, f64)> = vec![(vec![0u8; k], 1.0)];
        for r in per_chain {
            let (positions, map, s) = r?;
            stats = stats.merge(s);
            let size = joint.len() as u128 * map.len() as u128;
            if size > cap {
                return Err(Error::ResourceLimit {
                    resource: "joint outcome table",
                    size,
                    cap,
                });
            }
            let mut next = Vec::with_capacity(size as usize);
            for (vals, p) in &joint {
                for (sub, q) in &map {
                    let mut v = vals.clone();
                    for (&pos, &x) in positions.iter().zip(sub) {
                        v[pos] = x;
                    }
                    next.push((v, p * q));
                }
            }
            joint = next;
        }
        let mass: f64 = joint.iter().map(|(_, p)| p).sum();
        if !(mass >= crate::TAU_PROB) {
            return Err(Error::InfeasiblePostselection(mass));
        }
        for (_, p) in &mut joint {
            *p /= mass;
        }
        joint.sort_by(|a, b| a.0.cmp(&b.0));
        Ok((joint, mass, stats))
    }
}

struct Dfs<'a> {
    model: &'a Model,
    steps: &'a [Step],
    roles: &'a [Role],
    cap: u128,
    leaves: u128,
    stats: OccupancyStats,
    values: Vec<u8>,
    positions: &'a [usize],
    out: BTreeMap<Vec<u8>, f64>,
}

/// Branches with less conditional-path probability than this are dropped.
const NEGLIGIBLE: f64 = 1e-300;

impl Dfs<'_> {
    fn walk(&mut self, i: usize, derived: &mut Store, p: f64) -> Result<()> {
        if i == self.steps.len() {
            self.leaves += 1;
            if self.leaves > self.cap {
                return Err(Error::ResourceLimit {
                    resource: "chain outcome enumeration",
                    size: self.leaves,
                    cap: self.cap,
                });
            }
            let key: Vec<u8> = self.positions.iter().map(|&q| self.values[q]).collect();
            *self.out.entry(key).or_default() += p;
            return Ok(());
        }
        let step = &self.steps[i];
        let (joint, branches) = self.model.prepare(step, derived, &mut self.stats)?;
        for b in &branches {
            let q = p * b.probability;
            if q < NEGLIGIBLE {
                continue;
            }
            let mut consistent = true;
            for (j, &e) in step.measured.iter().enumerate() {
                match self.roles[e] {
                    Role::Output(pos) => self.values[pos] = b.outcome[j],
                    Role::Post(v) => consistent &= v == b.outcome[j],
                    Role::Ignored => {}
                }
            }
            if !consistent {
                continue;
            }
            let post = self.model.project(step, &joint, &b.outcome, b.probability);
            self.model.check_stored(&post, step.kept_pos.len(), &mut self.stats)?;
            let mut next = derived.clone();
            next.put(step.writes, step.kept_pos.len(), post);
            self.walk(i + 1, &mut next, q)?;
        }
        Ok(())
    }
}
