//! Circuit text format.
//!
//! ```text
//! # cdbs optical circuit
//! [modes]
//! 4
//! [input]
//! 1 1 0 0
//! [layers]
//! count 2
//! phase 0 2 3.1415926535897931e0
//! gate 0 0 1 <re00> <im00> <re01> <im01> <re10> <im10> <re11> <im11> [label]
//! gate 1 1 2 ...
//! [postselect]
//! 2 1
//! [outputs]
//! 0 1
//! ```
//!
//! Within a layer, phase lines come before gate lines; file order is kept.

use std::fmt::Write;

use super::{Layer, OpticalCircuit, PhaseShifter, PostselectionSpec, TwoModeGate};
use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::linalg::{Mat2, C64};
use crate::text::{field, finish, list, real, Document};

const HEADER: &str = "# cdbs optical circuit";
const SECTIONS: [&str; 5] = ["modes", "input", "layers", "postselect", "outputs"];

pub fn serialize(circuit: &OpticalCircuit) -> String {
    let mut s = String::new();
    let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "[modes]\n{}", circuit.modes).unwrap();
    writeln!(
        s,
        "[input]\n{}",
        join(&mut circuit.input.occupations().iter().map(|n| n.to_string()))
    )
    .unwrap();
    writeln!(s, "[layers]\ncount {}", circuit.layers.len()).unwrap();
    for (li, layer) in circuit.layers.iter().enumerate() {
        for p in &layer.phases {
            writeln!(s, "phase {li} {} {}", p.mode, real(p.phase)).unwrap();
        }
        for g in &layer.gates {
            write!(s, "gate {li} {} {}", g.mode_a, g.mode_b).unwrap();
            for z in g.unitary.flat() {
                write!(s, " {} {}", real(z.re), real(z.im)).unwrap();
            }
            if let Some(label) = &g.label {
                write!(s, " {label}").unwrap();
            }
            s.push('\n');
        }
    }
    s.push_str("[postselect]\n");
    for (mode, n) in circuit.postselection.iter() {
        writeln!(s, "{mode} {n}").unwrap();
    }
    s.push_str("[outputs]\n");
    if !circuit.output_modes.is_empty() {
        writeln!(
            s,
            "{}",
            join(&mut circuit.output_modes.iter().map(|m| m.to_string()))
        )
        .unwrap();
    }
    s
}

pub fn parse(text: &str) -> Result<OpticalCircuit> {
    let mut doc = Document::parse(text, &SECTIONS)?;

    let modes_sec = doc.take("modes")?;
    let (line, body) = modes_sec.single()?;
    let modes: usize = field(Some(body), line, "mode count")?;

    let input_sec = doc.take("input")?;
    let (line, body) = input_sec.single()?;
    let occupations: Vec<u32> = list(body, line, "occupation")?;
    if occupations.len() != modes {
        return Err(Error::parse(
            line,
            format!("input lists {} occupations for {modes} modes", occupations.len()),
        ));
    }

    let layers_sec = doc.take("layers")?;
    let mut lines = layers_sec.lines.iter();
    let (line, first) = lines
        .next()
        .ok_or_else(|| Error::parse(layers_sec.header_line, "missing `count` line"))?;
    let mut tokens = first.split_whitespace();
    match tokens.next() {
        Some("count") => {}
        Some(other) => return Err(Error::parse(*line, format!("unknown field `{other}`, expected `count`"))),
        None => unreachable!(),
    }
    let count: usize = field(tokens.next(), *line, "layer count")?;
    finish(tokens, *line)?;
    let mut layers = vec![Layer::default(); count];

    for &(line, text) in lines {
        let mut tokens = text.split_whitespace();
        let kind = tokens.next().unwrap_or_default();
        let layer: usize = match kind {
            "gate" | "phase" => field(tokens.next(), line, "layer index")?,
            other => return Err(Error::parse(line, format!("unknown field `{other}`"))),
        };
        if layer >= count {
            return Err(Error::parse(
                line,
                format!("layer index {layer} out of range (count {count})"),
            ));
        }
        if kind == "phase" {
            let mode = field(tokens.next(), line, "mode")?;
            let phase = field(tokens.next(), line, "phase")?;
            finish(tokens, line)?;
            layers[layer].phases.push(PhaseShifter { mode, phase });
        } else {
            let mode_a = field(tokens.next(), line, "mode")?;
            let mode_b = field(tokens.next(), line, "mode")?;
            let mut z = [C64::new(0.0, 0.0); 4];
            for zi in &mut z {
                let re = field(tokens.next(), line, "real part")?;
                let im = field(tokens.next(), line, "imaginary part")?;
                *zi = C64::new(re, im);
            }
            let label = tokens.next().map(str::to_string);
            finish(tokens, line)?;
            layers[layer].gates.push(TwoModeGate {
                mode_a,
                mode_b,
                unitary: Mat2::new(z[0], z[1], z[2], z[3]),
                label,
            });
        }
    }

    let post_sec = doc.take("postselect")?;
    let mut postselection = PostselectionSpec::new();
    for &(line, text) in &post_sec.lines {
        let mut tokens = text.split_whitespace();
        let mode = field(tokens.next(), line, "mode")?;
        let n = field(tokens.next(), line, "photon count")?;
        finish(tokens, line)?;
        if postselection.0.insert(mode, n).is_some() {
            return Err(Error::parse(line, format!("mode {mode} postselected twice")));
        }
    }

    let out_sec = doc.take("outputs")?;
    let mut output_modes = Vec::new();
    for &(line, text) in &out_sec.lines {
        output_modes.extend(list::<usize>(text, line, "output mode")?);
    }

    Ok(OpticalCircuit {
        modes,
        input: FockState::new(occupations),
        layers,
        postselection,
        output_modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OpticalCircuit {
        let mut c = OpticalCircuit::new(FockState::new(vec![1, 1, 0, 0]));
        c.add_phase(0, 2, std::f64::consts::PI);
        c.add_gate(0, TwoModeGate::balanced(0, 1));
        c.add_gate(2, TwoModeGate::new(1, 3, Mat2::rotation(0.123456789)));
        c.postselection.require(2, 0).require(3, 1);
        c.output_modes = vec![0, 1];
        c
    }

    #[test]
    fn round_trip_is_exact() {
        let c = sample();
        let text = serialize(&c);
        assert_eq!(parse(&text).unwrap(), c);
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let text = serialize(&sample());
        let cut = &text[..text.find("[postselect]").unwrap()];
        let err = parse(cut).unwrap_err();
        assert!(err.to_string().contains("missing section `[postselect]`"), "{err}");
        let half = &text[..text.len() / 2];
        assert!(matches!(parse(half), Err(Error::Parse { .. })));
    }

    #[test]
    fn unknown_field_is_named() {
        let text = serialize(&sample()).replace("phase 0 2", "shift 0 2");
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("unknown field `shift`"), "{err}");
    }

    #[test]
    fn unknown_section_is_named() {
        let text = serialize(&sample()) + "[extras]\n1\n";
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("unknown section `extras`"), "{err}");
    }

    #[test]
    fn reals_carry_17_significant_digits() {
        let text = serialize(&sample());
        assert!(text.contains("7.0710678118654757e-1"));
        assert!(text.contains("3.1415926535897931e0"));
    }
}
