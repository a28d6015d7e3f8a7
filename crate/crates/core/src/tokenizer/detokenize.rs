use std::collections::HashMap;
use std::ops::Range;

use super::sequence::{TokenSequence, TOKENS_PER_FACE};
use super::tokenize::tokenize_with;
use super::vocab::{ControlVocab, TokenKind};
use crate::error::{Error, Result};
use crate::mesh::{canonical_sort, HalfEdgeStructure, Normalization, QVertex, QuantizedMesh};

/// A mesh rebuilt from tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct Detokenized {
    /// Faces in token order; vertices numbered by first appearance.
    pub mesh: QuantizedMesh,
    /// Face ranges of each component, in token order.
    pub components: Vec<Range<usize>>,
    /// Separator index of each component.
    pub component_separators: Vec<usize>,
}

impl Detokenized {
    pub fn component_label<'a>(&self, vocab: &'a ControlVocab, c: usize) -> &'a str {
        &vocab.separator_labels()[self.component_separators[c]]
    }

    /// Separator index for every face.
    pub fn face_separators(&self) -> Vec<usize> {
        let mut out = vec![0; self.mesh.faces.len()];
        for (range, &sep) in self.components.iter().zip(&self.component_separators) {
            out[range.clone()].fill(sep);
        }
        out
    }
}

/// Rebuilds faces from 9-token groups and merges identical grid points.
///
/// A leading BOS is optional. Content ends at EOS or the first PAD; only
/// PAD/EOS may follow.
pub fn detokenize(tokens: &[u16], vocab: &ControlVocab) -> Result<Detokenized> {
    let bins = vocab.bins() as u16;
    let mut vertex_of: HashMap<QVertex, u32> = HashMap::new();
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    let mut components: Vec<Range<usize>> = Vec::new();
    let mut component_separators = Vec::new();

    let kind_at = |pos: usize| {
        vocab.kind(tokens[pos]).ok_or(Error::UnknownToken {
            position: pos,
            token: tokens[pos],
        })
    };

    let mut pos = 0;
    if !tokens.is_empty() && kind_at(0)? == TokenKind::Bos {
        pos = 1;
    }
    let mut in_component = false;
    let mut finished = false;
    while pos < tokens.len() {
        match kind_at(pos)? {
            TokenKind::Coord(_) if finished => {
                return Err(Error::Format(format!(
                    "coordinate token after end of sequence at {pos}"
                )));
            }
            TokenKind::Coord(_) => {
                if !in_component {
                    return Err(Error::MissingSeparator { position: pos });
                }
                let run = tokens[pos..]
                    .iter()
                    .take(TOKENS_PER_FACE)
                    .take_while(|&&t| t < bins)
                    .count();
                if run < TOKENS_PER_FACE {
                    if pos + run < tokens.len() {
                        kind_at(pos + run)?;
                    }
                    return Err(Error::TruncatedFace {
                        position: pos,
                        found: run,
                    });
                }
                let t = &tokens[pos..pos + TOKENS_PER_FACE];
                let face = [0, 1, 2].map(|k| {
                    let q = [t[3 * k], t[3 * k + 1], t[3 * k + 2]];
                    *vertex_of.entry(q).or_insert_with(|| {
                        vertices.push(q);
                        (vertices.len() - 1) as u32
                    })
                });
                faces.push(face);
                components.last_mut().unwrap().end = faces.len();
                pos += TOKENS_PER_FACE;
            }
            TokenKind::Separator(s) => {
                if finished {
                    return Err(Error::Format(format!("separator after end of sequence at {pos}")));
                }
                in_component = true;
                components.push(faces.len()..faces.len());
                component_separators.push(s);
                pos += 1;
            }
            TokenKind::Eos | TokenKind::Pad => {
                finished = true;
                pos += 1;
            }
            TokenKind::Bos => {
                return Err(Error::Format(format!("unexpected BOS at {pos}")));
            }
        }
    }

    Ok(Detokenized {
        mesh: QuantizedMesh {
            bins: vocab.bins(),
            vertices,
            faces,
            normalization: Normalization::IDENTITY,
        },
        components,
        component_separators,
    })
}

/// Rotation-invariant key of a face given by coordinates.
fn face_key(t: [QVertex; 3]) -> [QVertex; 3] {
    let k = (0..3).min_by_key(|&k| t[k]).unwrap();
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}

/// Detokenize, canonically sort and tokenize again, keeping each
/// component's separator. The identity on tokenizer output.
pub fn retokenize(seq: &TokenSequence) -> Result<TokenSequence> {
    let vocab = seq.vocab();
    let decoded = detokenize(seq.tokens(), vocab)?;
    let labels: HashMap<[QVertex; 3], usize> = decoded
        .mesh
        .face_coords()
        .into_iter()
        .zip(decoded.face_separators())
        .map(|(t, s)| (face_key(t), s))
        .collect();
    let sorted = canonical_sort(&decoded.mesh);
    let structure = HalfEdgeStructure::build(&sorted);
    Ok(tokenize_with(&structure, vocab, |mesh, f| {
        labels
            .get(&face_key(mesh.face_vertices(f as usize)))
            .copied()
            .unwrap_or(0)
    }))
}
