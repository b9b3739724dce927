use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt::{self, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::text::{field, finish, list, Document};

/// Measurement angles available to a pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Angle {
    Zero,
    PiOver4,
    MinusPiOver4,
    PiOver2,
    MinusPiOver2,
}

impl Angle {
    pub const ALL: [Angle; 5] = [
        Angle::Zero,
        Angle::PiOver4,
        Angle::MinusPiOver4,
        Angle::PiOver2,
        Angle::MinusPiOver2,
    ];

    pub fn radians(self) -> f64 {
        match self {
            Angle::Zero => 0.0,
            Angle::PiOver4 => FRAC_PI_4,
            Angle::MinusPiOver4 => -FRAC_PI_4,
            Angle::PiOver2 => FRAC_PI_2,
            Angle::MinusPiOver2 => -FRAC_PI_2,
        }
    }

    /// Rotation taking `|±_θ⟩ = (|0⟩ ± e^{iθ}|1⟩)/√2` to `|0⟩` / `|1⟩`:
    /// `H · diag(1, e^{−iθ})`.
    pub fn basis_rotation(self) -> Mat2 {
        Mat2::hadamard() * Mat2::phase(-self.radians())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Angle::Zero => "0",
            Angle::PiOver4 => "pi/4",
            Angle::MinusPiOver4 => "-pi/4",
            Angle::PiOver2 => "pi/2",
            Angle::MinusPiOver2 => "-pi/2",
        })
    }
}

impl FromStr for Angle {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        Angle::ALL.into_iter().find(|a| a.to_string() == s).ok_or(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    #[default]
    Plus,
    Minus,
}

impl Outcome {
    /// Computational-basis bit after the basis rotation: `+` is 0.
    pub fn bit(self) -> u8 {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

impl FromStr for Outcome {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "+" => Ok(Outcome::Plus),
            "-" => Ok(Outcome::Minus),
            _ => Err(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Measurement {
    pub angle: Angle,
    /// Postselected outcome. Ignored for output vertices, which are reported.
    pub outcome: Outcome,
}

impl Measurement {
    pub fn new(angle: Angle, outcome: Outcome) -> Self {
        Self { angle, outcome }
    }

    pub fn plus(angle: Angle) -> Self {
        Self::new(angle, Outcome::Plus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Edge-coloring layer in `1..=3`.
    pub layer: u8,
}

impl Edge {
    pub fn new(u: usize, v: usize, layer: u8) -> Self {
        Self { u, v, layer }
    }

    pub fn touches(&self, w: usize) -> bool {
        self.u == w || self.v == w
    }

    pub fn other(&self, w: usize) -> usize {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

/// A postselected measurement pattern on a graph state.
///
/// `pattern[v] == None` leaves vertex `v` unmeasured (computational-basis
/// readout); such vertices must be outputs. Non-output vertices are measured in
/// their `θ` basis and postselected on their outcome. Output vertices with a
/// measurement are measured in that basis and reported.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphProgram {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub pattern: Vec<Option<Measurement>>,
    pub outputs: Vec<usize>,
}

pub const MAX_LAYER: u8 = 3;
pub const MAX_DEGREE: usize = 3;

impl GraphProgram {
    /// Edgeless program with every vertex an unmeasured output.
    pub fn new(vertices: usize) -> Self {
        Self {
            vertices,
            edges: Vec::new(),
            pattern: vec![None; vertices],
            outputs: (0..vertices).collect(),
        }
    }

    pub fn with_edge(mut self, u: usize, v: usize, layer: u8) -> Self {
        self.edges.push(Edge::new(u, v, layer));
        self
    }

    pub fn with_measurement(mut self, v: usize, m: Measurement) -> Self {
        self.pattern[v] = Some(m);
        self
    }

    pub fn with_outputs(mut self, outputs: Vec<usize>) -> Self {
        self.outputs = outputs;
        self
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    pub fn is_output(&self, v: usize) -> bool {
        self.outputs.contains(&v)
    }

    /// Edges of one coloring layer, in list order.
    pub fn layer_edges(&self, layer: u8) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.layer == layer)
    }

    /// Edges sorted by `(layer, position in the list)`.
    pub fn edges_in_layer_order(&self) -> Vec<Edge> {
        (1..=MAX_LAYER).flat_map(|l| self.layer_edges(l).copied()).collect()
    }

    pub fn nonempty_layers(&self) -> usize {
        (1..=MAX_LAYER)
            .filter(|&l| self.layer_edges(l).next().is_some())
            .count()
    }

    /// Vertices whose outcome is postselected: measured and not output.
    pub fn postselected(&self) -> impl Iterator<Item = (usize, Measurement)> + '_ {
        (0..self.vertices).filter_map(|v| match self.pattern[v] {
            Some(m) if !self.is_output(v) => Some((v, m)),
            _ => None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidProgram(msg));
        if self.pattern.len() != self.vertices {
            return bad(format!(
                "pattern has {} entries for {} vertices",
                self.pattern.len(),
                self.vertices
            ));
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if e.u >= self.vertices || e.v >= self.vertices {
                return bad(format!("edge ({}, {}) names a missing vertex", e.u, e.v));
            }
            if e.u == e.v {
                return bad(format!("self-loop on vertex {}", e.u));
            }
            if !(1..=MAX_LAYER).contains(&e.layer) {
                return bad(format!("edge ({}, {}) has layer {} outside 1..=3", e.u, e.v, e.layer));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return bad(format!("edge ({}, {}) listed twice", e.u, e.v));
            }
        }
        for v in 0..self.vertices {
            let d = self.degree(v);
            if d > MAX_DEGREE {
                return bad(format!("vertex {v} has degree {d} > {MAX_DEGREE}"));
            }
        }
        for layer in 1..=MAX_LAYER {
            let mut used = BTreeSet::new();
            for e in self.layer_edges(layer) {
                for w in [e.u, e.v] {
                    if !used.insert(w) {
                        return bad(format!("layer {layer}: vertex {w} has two edges"));
                    }
                }
            }
        }
        let mut outs = BTreeSet::new();
        for &o in &self.outputs {
            if o >= self.vertices {
                return bad(format!("output vertex {o} out of range"));
            }
            if !outs.insert(o) {
                return bad(format!("output vertex {o} listed twice"));
            }
        }
        for v in 0..self.vertices {
            if self.pattern[v].is_none() && !outs.contains(&v) {
                return bad(format!("vertex {v} is neither measured nor an output"));
            }
        }
        Ok(())
    }
}

/// Columns between successive rung pairs on a row pair.
pub const BRICK_PERIOD: usize = 8;

/// Brickwork layout on a `rows × columns` grid, vertex `r * columns + c`.
///
/// Horizontal edges `(r, c)–(r, c+1)` go to layer 1 for even `c` and layer 2
/// for odd `c`. Vertical rungs, all in layer 3, join rows `r` and `r + 1` at
/// columns with `c mod 8 ∈ {2, 4}` when `r` is even and `c mod 8 ∈ {6, 0}`
/// (`c > 0`) when `r` is odd, so bricks of neighbouring row pairs are offset by
/// half a period and no vertex meets two rungs. The last column is left
/// unmeasured as output; every other vertex is measured at angle 0,
/// postselected on `+`.
pub fn brickwork_graph(rows: usize, columns: usize) -> GraphProgram {
    assert!(rows >= 1 && columns >= 1, "brickwork needs at least one row and column");
    let id = |r: usize, c: usize| r * columns + c;
    let mut g = GraphProgram::new(rows * columns);
    for r in 0..rows {
        for c in 0..columns.saturating_sub(1) {
            g.edges.push(Edge::new(id(r, c), id(r, c + 1), if c % 2 == 0 { 1 } else { 2 }));
        }
    }
    for r in 0..rows.saturating_sub(1) {
        for c in 0..columns {
            let phase = c % BRICK_PERIOD;
            let rung = if r % 2 == 0 {
                phase == 2 || phase == 4
            } else {
                (phase == 6 || phase == 0) && c > 0
            };
            if rung {
                g.edges.push(Edge::new(id(r, c), id(r + 1, c), 3));
            }
        }
    }
    g.outputs = (0..rows).map(|r| id(r, columns - 1)).collect();
    for v in 0..g.vertices {
        if !g.outputs.contains(&v) {
            g.pattern[v] = Some(Measurement::plus(Angle::Zero));
        }
    }
    g
}

const HEADER: &str = "# cdbs graph program";
const SECTIONS: [&str; 4] = ["vertices", "edges", "pattern", "outputs"];

pub fn serialize_program(g: &GraphProgram) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}\n[vertices]\n{}\n[edges]", g.vertices).unwrap();
    for e in &g.edges {
        writeln!(s, "{} {} {}", e.u, e.v, e.layer).unwrap();
    }
    s.push_str("[pattern]\n");
    for (v, m) in g.pattern.iter().enumerate() {
        if let Some(m) = m {
            writeln!(s, "{v} {} {}", m.angle, m.outcome).unwrap();
        }
    }
    s.push_str("[outputs]\n");
    if !g.outputs.is_empty() {
        let outs: Vec<String> = g.outputs.iter().map(|o| o.to_string()).collect();
        writeln!(s, "{}", outs.join(" ")).unwrap();
    }
    s
}

/// Parses the text form. The result is not validated; call
/// [`GraphProgram::validate`].
pub fn parse_program(text: &str) -> Result<GraphProgram> {
    let mut doc = Document::parse(text, &SECTIONS)?;
    let sec = doc.take("vertices")?;
    let (line, body) = sec.single()?;
    let vertices: usize = field(Some(body), line, "vertex count")?;

    let mut edges = Vec::new();
    for &(line, text) in &doc.take("edges")?.lines {
        let mut t = text.split_whitespace();
        let u = field(t.next(), line, "vertex")?;
        let v = field(t.next(), line, "vertex")?;
        let layer = field(t.next(), line, "edge layer")?;
        finish(t, line)?;
        edges.push(Edge::new(u, v, layer));
    }

    let mut pattern = vec![None; vertices];
    for &(line, text) in &doc.take("pattern")?.lines {
        let mut t = text.split_whitespace();
        let v: usize = field(t.next(), line, "vertex")?;
        let angle = field(t.next(), line, "angle (0, pi/4, -pi/4, pi/2 or -pi/2)")?;
        let outcome = field(t.next(), line, "outcome (+ or -)")?;
        finish(t, line)?;
        let slot = pattern
            .get_mut(v)
            .ok_or_else(|| Error::parse(line, format!("vertex {v} out of range")))?;
        if slot.is_some() {
            return Err(Error::parse(line, format!("vertex {v} has two pattern entries")));
        }
        *slot = Some(Measurement::new(angle, outcome));
    }

    let mut outputs = Vec::new();
    for &(line, text) in &doc.take("outputs")?.lines {
        outputs.extend(list::<usize>(text, line, "output vertex")?);
    }
    Ok(GraphProgram {
        vertices,
        edges,
        pattern,
        outputs,
    })
}
