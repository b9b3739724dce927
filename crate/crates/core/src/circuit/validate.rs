use std::collections::BTreeSet;
use std::fmt;

use super::OpticalCircuit;
use crate::TAU_UNITARY;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    InputLength { expected: usize, found: usize },
    ModeOutOfRange { layer: usize, mode: usize },
    SelfLoop { layer: usize, mode: usize },
    ModesOverlap { layer: usize, modes: BTreeSet<usize> },
    NonUnitaryGate { layer: usize, modes: (usize, usize), label: Option<String>, deviation: f64 },
    PhaseOutOfRange { layer: usize, mode: usize, phase: f64 },
    BadLabel { layer: usize, label: String },
    PostselectOutOfRange { mode: usize },
    OutputOutOfRange { mode: usize },
    DuplicateOutput { mode: usize },
    RegistersOverlap { modes: BTreeSet<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn set(s: &BTreeSet<usize>) -> String {
            let items: Vec<String> = s.iter().map(|m| m.to_string()).collect();
            format!("{{{}}}", items.join(", "))
        }
        match self {
            Violation::InputLength { expected, found } => {
                write!(f, "input has {found} occupations for {expected} modes")
            }
            Violation::ModeOutOfRange { layer, mode } => {
                write!(f, "layer {layer}: mode {mode} out of range")
            }
            Violation::SelfLoop { layer, mode } => {
                write!(f, "layer {layer}: gate acts twice on mode {mode}")
            }
            Violation::ModesOverlap { layer, modes } => {
                write!(f, "layer {layer}: modes overlap {}", set(modes))
            }
            Violation::NonUnitaryGate {
                layer,
                modes,
                label,
                deviation,
            } => {
                let name = label.as_deref().unwrap_or("gate");
                write!(
                    f,
                    "layer {layer}: {name} on modes ({}, {}) is not unitary (deviation {deviation:e})",
                    modes.0, modes.1
                )
            }
            Violation::PhaseOutOfRange { layer, mode, phase } => {
                write!(f, "layer {layer}: phase {phase} on mode {mode} outside [0, 2pi)")
            }
            Violation::BadLabel { layer, label } => {
                write!(f, "layer {layer}: label {label:?} must be non-empty without whitespace")
            }
            Violation::PostselectOutOfRange { mode } => {
                write!(f, "postselected mode {mode} out of range")
            }
            Violation::OutputOutOfRange { mode } => write!(f, "output mode {mode} out of range"),
            Violation::DuplicateOutput { mode } => write!(f, "output mode {mode} listed twice"),
            Violation::RegistersOverlap { modes } => {
                write!(f, "postselection and output registers overlap {}", set(modes))
            }
        }
    }
}

/// Structured list of problems; empty means valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> crate::Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(crate::Error::InvalidCircuit(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

pub fn validate(circuit: &OpticalCircuit) -> ValidationReport {
    let m = circuit.modes;
    let mut out = Vec::new();

    if circuit.input.modes() != m {
        out.push(Violation::InputLength {
            expected: m,
            found: circuit.input.modes(),
        });
    }

    for (li, layer) in circuit.layers.iter().enumerate() {
        for p in &layer.phases {
            if p.mode >= m {
                out.push(Violation::ModeOutOfRange { layer: li, mode: p.mode });
            }
            if !(0.0..std::f64::consts::TAU).contains(&p.phase) {
                out.push(Violation::PhaseOutOfRange {
                    layer: li,
                    mode: p.mode,
                    phase: p.phase,
                });
            }
        }
        let mut seen = BTreeSet::new();
        let mut overlap = BTreeSet::new();
        for g in &layer.gates {
            for mode in [g.mode_a, g.mode_b] {
                if mode >= m {
                    out.push(Violation::ModeOutOfRange { layer: li, mode });
                }
            }
            if g.mode_a == g.mode_b {
                out.push(Violation::SelfLoop { layer: li, mode: g.mode_a });
            }
            for mode in [g.mode_a, g.mode_b] {
                if !seen.insert(mode) {
                    overlap.insert(mode);
                }
            }
            let deviation = g.unitary.unitarity_error();
            if !(deviation <= TAU_UNITARY) {
                out.push(Violation::NonUnitaryGate {
                    layer: li,
                    modes: (g.mode_a, g.mode_b),
                    label: g.label.clone(),
                    deviation,
                });
            }
            if let Some(label) = &g.label {
                if label.is_empty() || label.chars().any(char::is_whitespace) {
                    out.push(Violation::BadLabel {
                        layer: li,
                        label: label.clone(),
                    });
                }
            }
        }
        if !overlap.is_empty() {
            out.push(Violation::ModesOverlap {
                layer: li,
                modes: overlap,
            });
        }
    }

    for (mode, _) in circuit.postselection.iter() {
        if mode >= m {
            out.push(Violation::PostselectOutOfRange { mode });
        }
    }
    let mut outputs = BTreeSet::new();
    for &mode in &circuit.output_modes {
        if mode >= m {
            out.push(Violation::OutputOutOfRange { mode });
        }
        if !outputs.insert(mode) {
            out.push(Violation::DuplicateOutput { mode });
        }
    }
    let shared: BTreeSet<usize> = outputs
        .iter()
        .copied()
        .filter(|&mode| circuit.postselection.get(mode).is_some())
        .collect();
    if !shared.is_empty() {
        out.push(Violation::RegistersOverlap { modes: shared });
    }

    ValidationReport { violations: out }
}
