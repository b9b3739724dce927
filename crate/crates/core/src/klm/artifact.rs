//! Metadata sidecar written next to a compiled circuit.
//!
//! ```text
//! # cdbs compiled artifact
//! [artifact]
//! pipeline depth4
//! depth 4
//! source <sha-256 of the graph program text>
//! cz_blocks 1
//! teleports 0
//! [qubits]
//! <vertex> <zero rail> <one rail>
//! [postselect]
//! <mode> <photons>
//! ```

use std::fmt::Write;

use super::block::DualRailMap;
use super::compile::{CompiledArtifact, Pipeline};
use crate::circuit::{self, OpticalCircuit, PostselectionSpec};
use crate::error::{Error, Result};
use crate::text::{field, finish, Document};

const HEADER: &str = "# cdbs compiled artifact";
const SECTIONS: [&str; 3] = ["artifact", "qubits", "postselect"];

/// Everything in the sidecar; together with the circuit file it rebuilds the
/// [`CompiledArtifact`].
#[derive(Clone, Debug, PartialEq)]
pub struct ArtifactMetadata {
    pub pipeline: Pipeline,
    pub depth: usize,
    pub source_digest: String,
    pub cz_blocks: usize,
    pub teleports: usize,
    pub output_qubits: Vec<usize>,
    pub qubit_map: DualRailMap,
    pub postselection: PostselectionSpec,
}

impl ArtifactMetadata {
    pub fn of(a: &CompiledArtifact) -> Self {
        Self {
            pipeline: a.pipeline,
            depth: a.depth,
            source_digest: a.source_digest.clone(),
            cz_blocks: a.cz_blocks,
            teleports: a.teleports,
            output_qubits: a.output_qubits.clone(),
            qubit_map: a.qubit_map.clone(),
            postselection: a.circuit.postselection.clone(),
        }
    }

    /// Joins the sidecar with its circuit, checking that they agree.
    pub fn attach(self, circuit: OpticalCircuit) -> Result<CompiledArtifact> {
        circuit::validate(&circuit).into_result()?;
        if circuit.postselection != self.postselection {
            return Err(Error::InvalidProgram(
                "metadata postselection differs from the circuit's".into(),
            ));
        }
        let measured = circuit::depth(&circuit);
        if measured != self.depth {
            return Err(Error::InvalidProgram(format!(
                "metadata depth {} differs from circuit depth {measured}",
                self.depth
            )));
        }
        for &(z, o) in &self.qubit_map.rails {
            for m in [z, o] {
                if !circuit.output_modes.contains(&m) {
                    return Err(Error::InvalidProgram(format!("rail mode {m} is not an output mode")));
                }
            }
        }
        Ok(CompiledArtifact {
            circuit,
            pipeline: self.pipeline,
            depth: self.depth,
            output_qubits: self.output_qubits,
            qubit_map: self.qubit_map,
            source_digest: self.source_digest,
            cz_blocks: self.cz_blocks,
            teleports: self.teleports,
        })
    }
}

pub fn serialize_metadata(m: &ArtifactMetadata) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}\n[artifact]").unwrap();
    writeln!(s, "pipeline {}", m.pipeline).unwrap();
    writeln!(s, "depth {}", m.depth).unwrap();
    writeln!(s, "source {}", m.source_digest).unwrap();
    writeln!(s, "cz_blocks {}", m.cz_blocks).unwrap();
    writeln!(s, "teleports {}", m.teleports).unwrap();
    s.push_str("[qubits]\n");
    for (v, (z, o)) in m.output_qubits.iter().zip(&m.qubit_map.rails) {
        writeln!(s, "{v} {z} {o}").unwrap();
    }
    s.push_str("[postselect]\n");
    for (mode, n) in m.postselection.iter() {
        writeln!(s, "{mode} {n}").unwrap();
    }
    s
}

pub fn parse_metadata(text: &str) -> Result<ArtifactMetadata> {
    let mut doc = Document::parse(text, &SECTIONS)?;
    let art = doc.take("artifact")?;
    let (mut pipeline, mut depth, mut source, mut cz, mut tp) = (None, None, None, None, None);
    for &(line, text) in &art.lines {
        let mut t = text.split_whitespace();
        let key = t.next().unwrap_or_default();
        match key {
            "pipeline" => {
                let tok = t.next();
                pipeline = Some(
                    tok.unwrap_or_default()
                        .parse::<Pipeline>()
                        .map_err(|e| Error::parse(line, e.to_string()))?,
                );
            }
            "depth" => depth = Some(field::<usize>(t.next(), line, "depth")?),
            "source" => source = Some(field::<String>(t.next(), line, "source digest")?),
            "cz_blocks" => cz = Some(field::<usize>(t.next(), line, "block count")?),
            "teleports" => tp = Some(field::<usize>(t.next(), line, "teleport count")?),
            other => return Err(Error::parse(line, format!("unknown field `{other}`"))),
        }
        finish(t, line)?;
    }
    let missing = |what: &str| Error::parse(art.header_line, format!("missing field `{what}`"));

    let mut output_qubits = Vec::new();
    let mut rails = Vec::new();
    for &(line, text) in &doc.take("qubits")?.lines {
        let mut t = text.split_whitespace();
        output_qubits.push(field(t.next(), line, "vertex")?);
        rails.push((field(t.next(), line, "zero rail")?, field(t.next(), line, "one rail")?));
        finish(t, line)?;
    }
    let mut postselection = PostselectionSpec::new();
    for &(line, text) in &doc.take("postselect")?.lines {
        let mut t = text.split_whitespace();
        let mode = field(t.next(), line, "mode")?;
        let n = field(t.next(), line, "photon count")?;
        finish(t, line)?;
        postselection.require(mode, n);
    }
    Ok(ArtifactMetadata {
        pipeline: pipeline.ok_or_else(|| missing("pipeline"))?,
        depth: depth.ok_or_else(|| missing("depth"))?,
        source_digest: source.ok_or_else(|| missing("source"))?,
        cz_blocks: cz.ok_or_else(|| missing("cz_blocks"))?,
        teleports: tp.ok_or_else(|| missing("teleports"))?,
        output_qubits,
        qubit_map: DualRailMap { rails },
        postselection,
    })
}
