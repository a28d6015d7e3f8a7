use std::io::Write;

use serde::{Deserialize, Serialize};

use super::proposer::{FaceProposer, Proposal};
use super::state::{AttachMode, DecodeState};
use crate::error::Result;
use crate::tokenizer::{detokenize, ControlVocab, Detokenized, TokenSequence, TOKENS_PER_FACE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Separator,
    Face,
    Eos,
    Truncated,
}

/// One line of the decision trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub action: Action,
    /// Root after applying `delta`.
    pub root: Option<usize>,
    pub delta: Option<u32>,
    pub queue_len: usize,
    pub accepted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_faces: usize,
    /// Total stream length including BOS and the closing EOS.
    pub max_tokens: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_faces: 20_000,
            max_tokens: usize::MAX,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecodeRun {
    pub sequence: TokenSequence,
    pub decoded: Detokenized,
    pub trace: Vec<TraceEntry>,
    /// A limit stopped the run before the proposer closed it.
    pub truncated: bool,
}

/// Drives a [`DecodeState`] with a proposer and records every decision.
#[derive(Debug, Clone)]
pub struct Decoder {
    state: DecodeState,
    limits: Limits,
    trace: Vec<TraceEntry>,
    truncated: bool,
}

impl Decoder {
    pub fn new(vocab: ControlVocab, attach: AttachMode, limits: Limits) -> Self {
        Decoder {
            state: DecodeState::new(vocab, attach),
            limits,
            trace: Vec::new(),
            truncated: false,
        }
    }

    pub fn state(&self) -> &DecodeState {
        &self.state
    }

    /// Decisions so far, including a rejected one that ended the run.
    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    fn record(&mut self, action: Action, delta: Option<u32>, accepted: bool) {
        self.trace.push(TraceEntry {
            step: self.trace.len(),
            action,
            root: self.state.root(),
            delta,
            queue_len: self.state.queue_len(),
            accepted,
        });
    }

    fn room_for_face(&self) -> bool {
        self.state.face_count() < self.limits.max_faces
            && self.state.tokens().len() + TOKENS_PER_FACE < self.limits.max_tokens
    }

    /// Applies one proposal. Returns `false` once the run is over.
    pub fn step(&mut self, p: &mut impl FaceProposer) -> Result<bool> {
        match p.propose(&self.state) {
            Proposal::Separator(s) => {
                // a separator must leave room for its seed face and EOS
                if self.state.tokens().len() + 1 + TOKENS_PER_FACE >= self.limits.max_tokens
                    || self.state.face_count() >= self.limits.max_faces
                {
                    return Ok(self.truncate());
                }
                let r = self.state.push_separator(s);
                self.record(Action::Separator, None, r.is_ok());
                r.map(|_| true)
            }
            Proposal::Face { delta, face } => {
                if !self.room_for_face() {
                    return Ok(self.truncate());
                }
                let seed = self.state.awaiting_seed();
                let delta = (!seed).then_some(delta);
                if let Some(d) = delta {
                    if let Err(e) = self.state.advance_root(d as usize) {
                        self.record(Action::Face, delta, false);
                        return Err(e);
                    }
                }
                let r = self.state.push_face(face);
                self.record(Action::Face, delta, r.is_ok());
                r.map(|_| true)
            }
            Proposal::Eos => {
                let r = self.state.push_eos();
                self.record(Action::Eos, None, r.is_ok());
                r.map(|_| false)
            }
        }
    }

    fn truncate(&mut self) -> bool {
        self.truncated = true;
        self.record(Action::Truncated, None, false);
        false
    }

    /// Steps until EOS or a limit.
    pub fn run(&mut self, p: &mut impl FaceProposer) -> Result<()> {
        while self.step(p)? {}
        Ok(())
    }

    pub fn finish(self) -> Result<DecodeRun> {
        let sequence = self.state.into_sequence();
        let decoded = detokenize(sequence.tokens(), sequence.vocab())?;
        Ok(DecodeRun {
            sequence,
            decoded,
            trace: self.trace,
            truncated: self.truncated,
        })
    }
}

/// Runs `proposer` to completion with the first-edge attachment rule.
pub fn run(proposer: &mut impl FaceProposer, limits: Limits, vocab: &ControlVocab) -> Result<DecodeRun> {
    let mut d = Decoder::new(vocab.clone(), AttachMode::FirstEdge, limits);
    d.run(proposer)?;
    d.finish()
}

pub fn write_trace(trace: &[TraceEntry], mut out: impl Write) -> Result<()> {
    for e in trace {
        serde_json::to_writer(&mut out, e)?;
        writeln!(out)?;
    }
    Ok(())
}
