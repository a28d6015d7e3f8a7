//! RIPL binary token files and their JSON-lines mirror.
//!
//! RIPL layout, little-endian throughout:
//!
//! ```text
//! u32   magic 0x5249504C
//! u16   version (1)
//! u16   bins
//! u16   control count, then per control: u16 id, u16 label length, label bytes (UTF-8)
//! u32   face count F
//! u32   token count T
//! u16×T tokens
//! u32×F root ordinals (seeds store their own ordinal)
//! i32×F Δ (-1 marks a seed)
//! ```

use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use super::sequence::{TokenSequence, SEED_DELTA, TOKENS_PER_FACE};
use super::vocab::ControlVocab;
use crate::error::{Error, Result};

pub const RIPL_MAGIC: u32 = 0x5249_504C;
pub const RIPL_VERSION: u16 = 1;

pub fn write_ripl(seq: &TokenSequence, mut out: impl Write) -> Result<()> {
    let mut buf = Vec::with_capacity(32 + seq.tokens().len() * 2 + seq.face_count() * 8);
    buf.extend_from_slice(&RIPL_MAGIC.to_le_bytes());
    buf.extend_from_slice(&RIPL_VERSION.to_le_bytes());
    buf.extend_from_slice(&(seq.bins() as u16).to_le_bytes());
    let table = seq.vocab().control_table();
    buf.extend_from_slice(&(table.len() as u16).to_le_bytes());
    for (id, label) in &table {
        buf.extend_from_slice(&id.to_le_bytes());
        buf.extend_from_slice(&(label.len() as u16).to_le_bytes());
        buf.extend_from_slice(label.as_bytes());
    }
    buf.extend_from_slice(&(seq.face_count() as u32).to_le_bytes());
    buf.extend_from_slice(&(seq.tokens().len() as u32).to_le_bytes());
    for t in seq.tokens() {
        buf.extend_from_slice(&t.to_le_bytes());
    }
    for r in seq.root_ordinals() {
        buf.extend_from_slice(&r.to_le_bytes());
    }
    for d in seq.delta_values() {
        buf.extend_from_slice(&d.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn to_ripl_bytes(seq: &TokenSequence) -> Vec<u8> {
    let mut buf = Vec::new();
    write_ripl(seq, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.data.len())
            .ok_or_else(|| Error::Format(format!("unexpected end of data at byte {}", self.pos)))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

pub fn read_ripl(mut input: impl Read) -> Result<TokenSequence> {
    let mut data = Vec::new();
    input.read_to_end(&mut data)?;
    from_ripl_bytes(&data)
}

pub fn from_ripl_bytes(data: &[u8]) -> Result<TokenSequence> {
    let mut c = Cursor { data, pos: 0 };
    let magic = c.u32()?;
    if magic != RIPL_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:#010x}")));
    }
    let version = c.u16()?;
    if version != RIPL_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let bins = c.u16()? as u32;
    let n_controls = c.u16()?;
    let mut table = Vec::with_capacity(n_controls as usize);
    for _ in 0..n_controls {
        let id = c.u16()?;
        let len = c.u16()? as usize;
        let label =
            std::str::from_utf8(c.take(len)?).map_err(|_| Error::Format("control label is not UTF-8".into()))?;
        table.push((id, label.to_string()));
    }
    let vocab = ControlVocab::from_control_table(bins, &table)?;
    let faces = c.u32()? as usize;
    let n_tokens = c.u32()? as usize;
    let tokens = (0..n_tokens).map(|_| c.u16()).collect::<Result<Vec<_>>>()?;
    let roots = (0..faces).map(|_| c.u32()).collect::<Result<Vec<_>>>()?;
    let deltas = (0..faces).map(|_| c.i32()).collect::<Result<Vec<_>>>()?;
    if c.pos != data.len() {
        return Err(Error::Format(format!("{} trailing bytes", data.len() - c.pos)));
    }
    build_checked(vocab, tokens, roots, deltas)
}

fn build_checked(vocab: ControlVocab, tokens: Vec<u16>, roots: Vec<u32>, deltas: Vec<i32>) -> Result<TokenSequence> {
    if let Some((position, &token)) = tokens.iter().enumerate().find(|(_, &t)| t as usize >= vocab.size()) {
        return Err(Error::UnknownToken { position, token });
    }
    let seq = TokenSequence::from_parts(vocab, tokens, roots, deltas);
    let coords = seq.tokens().iter().filter(|&&t| t < seq.bins() as u16).count();
    if coords != TOKENS_PER_FACE * seq.face_count() {
        return Err(Error::Format(format!(
            "{coords} coordinate tokens for {} faces",
            seq.face_count()
        )));
    }
    for i in 0..seq.face_count() {
        let (r, d) = (seq.root_ordinals()[i] as usize, seq.delta_values()[i]);
        let ok = if d == SEED_DELTA { r == i } else { d >= 0 && r < i };
        if !ok {
            return Err(Error::Format(format!("inconsistent root record for face {i}")));
        }
    }
    Ok(seq)
}

#[derive(Serialize, Deserialize)]
struct JsonHeader {
    format: String,
    version: u16,
    bins: u32,
    controls: Vec<(u16, String)>,
    faces: usize,
    tokens: Vec<u16>,
}

#[derive(Serialize, Deserialize)]
struct JsonFace {
    face: usize,
    coords: Vec<u16>,
    root: Option<usize>,
    delta: Option<u32>,
    frontier: [u32; 2],
}

/// Header line with the full token stream, then one line per face.
pub fn write_jsonl(seq: &TokenSequence, mut out: impl Write) -> Result<()> {
    let header = JsonHeader {
        format: "ripl-jsonl".into(),
        version: RIPL_VERSION,
        bins: seq.bins(),
        controls: seq.vocab().control_table(),
        faces: seq.face_count(),
        tokens: seq.tokens().to_vec(),
    };
    serde_json::to_writer(&mut out, &header)?;
    writeln!(out)?;
    for i in 0..seq.face_count() {
        let f = seq.frontier(i);
        serde_json::to_writer(
            &mut out,
            &JsonFace {
                face: i,
                coords: seq.face_tokens(i).to_vec(),
                root: seq.root(i),
                delta: seq.delta(i),
                frontier: [f.head, f.face],
            },
        )?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_jsonl(input: impl BufRead) -> Result<TokenSequence> {
    let mut lines = input.lines();
    let header: JsonHeader = serde_json::from_str(
        &lines
            .next()
            .ok_or_else(|| Error::Format("empty JSON-lines file".into()))??,
    )?;
    let vocab = ControlVocab::from_control_table(header.bins, &header.controls)?;
    let mut roots = Vec::with_capacity(header.faces);
    let mut deltas = Vec::with_capacity(header.faces);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: JsonFace = serde_json::from_str(&line)?;
        roots.push(f.root.unwrap_or(f.face) as u32);
        deltas.push(f.delta.map_or(SEED_DELTA, |d| d as i32));
    }
    if roots.len() != header.faces {
        return Err(Error::Format(format!(
            "header announces {} faces, found {}",
            header.faces,
            roots.len()
        )));
    }
    build_checked(vocab, header.tokens, roots, deltas)
}
