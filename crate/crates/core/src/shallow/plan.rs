use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Which layer-2 group a traversal starts from, and which neighbour it
/// follows first. Every order gives the same distribution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StepOrder {
    #[default]
    LowestFirst,
    HighestFirst,
}

/// One measurement: apply a layer-2 group's gate to the joint state of the
/// slots it reads, measure its elements, and store the conditional state of
/// the rest in a new slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// Index into [`ChainPlan::second`].
    pub group: usize,
    /// Measured elements, in gate order.
    pub measured: Vec<usize>,
    /// Layer-1 groups whose elements meet this step's gate.
    pub depends_on: Vec<usize>,
    /// Slots consumed, in joint-state order.
    pub reads: Vec<usize>,
    /// Slot receiving the unmeasured elements; possibly empty.
    pub writes: usize,
    pub(crate) measured_pos: Vec<usize>,
    pub(crate) kept_pos: Vec<usize>,
}

/// A connected component of the layer-1 / layer-2 pairing graph: a path or a
/// cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub steps: Vec<Step>,
    /// Elements of the chain, ascending.
    pub elements: Vec<usize>,
    pub cycle: bool,
}

/// Measurement schedule of a depth-≤2 circuit over `elements` qubits or modes.
///
/// Slots `0..first.len()` hold the states of the layer-1 groups; each step
/// appends one slot. Since groups have at most two elements, every slot holds
/// at most two unmeasured elements and a step's joint state at most four.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPlan {
    pub elements: usize,
    /// Layer-1 groups. Unpaired elements form singletons.
    pub first: Vec<Vec<usize>>,
    /// Layer-2 groups, measured together.
    pub second: Vec<Vec<usize>>,
    /// Elements of each slot.
    pub slots: Vec<Vec<usize>>,
    pub chains: Vec<Chain>,
}

/// Gate pairs plus singletons for uncovered elements, sorted by lowest element.
fn groups(elements: usize, pairs: &[(usize, usize)], layer: usize) -> Result<Vec<Vec<usize>>> {
    let mut used = vec![false; elements];
    let mut out = Vec::with_capacity(elements);
    for &(a, b) in pairs {
        if a >= elements || b >= elements || a == b {
            return Err(Error::InvalidProgram(format!(
                "layer {layer}: bad pair ({a}, {b}) over {elements} elements"
            )));
        }
        for e in [a, b] {
            if std::mem::replace(&mut used[e], true) {
                return Err(Error::InvalidProgram(format!("layer {layer}: element {e} used twice")));
            }
        }
        out.push(vec![a, b]);
    }
    out.extend((0..elements).filter(|&e| !used[e]).map(|e| vec![e]));
    out.sort_by_key(|g| g.iter().copied().min());
    Ok(out)
}

fn owner(groups: &[Vec<usize>], elements: usize) -> Vec<usize> {
    let mut of = vec![0; elements];
    for (i, g) in groups.iter().enumerate() {
        for &e in g {
            of[e] = i;
        }
    }
    of
}

impl ChainPlan {
    /// Plans a circuit whose first layer pairs `first` and second layer pairs
    /// `second`; pair orientation is kept as gate order.
    pub fn new(
        elements: usize,
        first: &[(usize, usize)],
        second: &[(usize, usize)],
        order: StepOrder,
    ) -> Result<Self> {
        let first = groups(elements, first, 1)?;
        let second = groups(elements, second, 2)?;
        let first_of = owner(&first, elements);
        let second_of = owner(&second, elements);

        let neighbours: Vec<Vec<usize>> = second
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                let set: BTreeSet<usize> = g
                    .iter()
                    .flat_map(|&e| first[first_of[e]].iter().map(|&f| second_of[f]))
                    .filter(|&h| h != gi)
                    .collect();
                let mut v: Vec<usize> = set.into_iter().collect();
                if order == StepOrder::HighestFirst {
                    v.reverse();
                }
                v
            })
            .collect();

        let mut slots = first.clone();
        let mut slot_of = first_of.clone();
        let mut visited = vec![false; second.len()];
        let mut chains = Vec::new();
        let starts: Vec<usize> = match order {
            StepOrder::LowestFirst => (0..second.len()).collect(),
            StepOrder::HighestFirst => (0..second.len()).rev().collect(),
        };
        for start in starts {
            if visited[start] {
                continue;
            }
            let mut steps = Vec::new();
            let mut stack = vec![start];
            while let Some(gi) = stack.pop() {
                if std::mem::replace(&mut visited[gi], true) {
                    continue;
                }
                stack.extend(neighbours[gi].iter().rev().filter(|&&h| !visited[h]));

                let measured = second[gi].clone();
                let mut reads: Vec<usize> = Vec::with_capacity(2);
                for &e in &measured {
                    if !reads.contains(&slot_of[e]) {
                        reads.push(slot_of[e]);
                    }
                }
                let joint: Vec<usize> = reads.iter().flat_map(|&s| slots[s].iter().copied()).collect();
                let measured_pos = measured
                    .iter()
                    .map(|e| joint.iter().position(|j| j == e).expect("element is in a read slot"))
                    .collect();
                let kept_pos: Vec<usize> = (0..joint.len()).filter(|&p| !measured.contains(&joint[p])).collect();
                let kept: Vec<usize> = kept_pos.iter().map(|&p| joint[p]).collect();
                assert!(kept.len() <= 2, "slot of {} elements", kept.len());
                let writes = slots.len();
                for &e in &kept {
                    slot_of[e] = writes;
                }
                slots.push(kept);
                let mut depends_on: Vec<usize> = measured.iter().map(|&e| first_of[e]).collect();
                depends_on.dedup();
                steps.push(Step {
                    group: gi,
                    measured,
                    depends_on,
                    reads,
                    writes,
                    measured_pos,
                    kept_pos,
                });
            }
            let mut elements: Vec<usize> = steps.iter().flat_map(|s| s.measured.iter().copied()).collect();
            elements.sort_unstable();
            let first_groups: BTreeSet<usize> = elements.iter().map(|&e| first_of[e]).collect();
            let cycle = elements.len() == first_groups.len() + steps.len();
            chains.push(Chain { steps, elements, cycle });
        }
        if order == StepOrder::HighestFirst {
            chains.reverse();
        }
        Ok(Self {
            elements,
            first,
            second,
            slots,
            chains,
        })
    }

    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.chains.iter().flat_map(|c| &c.steps)
    }

    /// Largest number of elements any slot holds.
    pub fn max_slot_width(&self) -> usize {
        self.slots.iter().map(Vec::len).max().unwrap_or(0)
    }
}

impl fmt::Display for ChainPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ci, chain) in self.chains.iter().enumerate() {
            let kind = if chain.cycle { "cycle" } else { "path" };
            writeln!(f, "chain {ci} ({kind}, {} steps)", chain.steps.len())?;
            for s in &chain.steps {
                writeln!(
                    f,
                    "  measure {:?} reading slots {:?} -> slot {} {:?}",
                    s.measured, s.reads, s.writes, self.slots[s.writes]
                )?;
            }
        }
        Ok(())
    }
}
