//! RIPM sidecar files for masks and NSCA plans.
//!
//! Little-endian. Every file starts with `u32` magic `0x5249504D`,
//! `u16` version (1) and a `u8` kind:
//!
//! ```text
//! kind 1, dense mask:   u32 window start, u32 n, n·n i8 (0 attend, -1 masked)
//! kind 2, row supports: u32 window start, u32 n, per row u32 count + u32 columns
//! kind 3, NSCA plan:    u32 seq_len, u32 block_size, u32 top_k, u32 kernel,
//!                       u32 stride, u32 steps, per step
//!                       u32 step, u32 valid blocks, u32 local start,
//!                       u32 local end, u32 count + u32 selected block ids
//! ```
//!
//! Columns in kinds 1 and 2 are window-local.

use std::io::Write;

use super::frontier::FrontierMask;
use super::nsca::{NscaParams, NscaStep};
use crate::error::{Error, Result};

pub const RIPM_MAGIC: u32 = 0x5249_504D;
pub const RIPM_VERSION: u16 = 1;

const KIND_DENSE: u8 = 1;
const KIND_SUPPORTS: u8 = 2;
const KIND_PLAN: u8 = 3;

/// Decoded contents of a RIPM file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaskFile {
    Dense {
        window_start: u32,
        n: u32,
        cells: Vec<i8>,
    },
    RowSupports {
        window_start: u32,
        rows: Vec<Vec<u32>>,
    },
    Plan {
        seq_len: u32,
        params: NscaParams,
        steps: Vec<NscaStep>,
    },
}

fn header(kind: u8) -> Vec<u8> {
    let mut b = Vec::new();
    b.extend_from_slice(&RIPM_MAGIC.to_le_bytes());
    b.extend_from_slice(&RIPM_VERSION.to_le_bytes());
    b.push(kind);
    b
}

fn put(b: &mut Vec<u8>, v: usize) {
    b.extend_from_slice(&(v as u32).to_le_bytes());
}

pub fn dense_bytes(mask: &FrontierMask) -> Vec<u8> {
    let mut b = header(KIND_DENSE);
    put(&mut b, mask.window().start);
    put(&mut b, mask.len());
    b.extend(mask.to_i8().into_iter().map(|v| v as u8));
    b
}

pub fn supports_bytes(mask: &FrontierMask) -> Vec<u8> {
    let mut b = header(KIND_SUPPORTS);
    put(&mut b, mask.window().start);
    put(&mut b, mask.len());
    for r in 0..mask.len() {
        let s = mask.row_support(r);
        put(&mut b, s.len());
        for c in s {
            put(&mut b, c);
        }
    }
    b
}

pub fn plan_bytes(seq_len: usize, params: NscaParams, steps: &[NscaStep]) -> Vec<u8> {
    let mut b = header(KIND_PLAN);
    for v in [
        seq_len,
        params.block_size,
        params.top_k,
        params.local_kernel,
        params.local_stride,
        steps.len(),
    ] {
        put(&mut b, v);
    }
    for s in steps {
        for v in [s.step, s.valid_blocks, s.local.start, s.local.end, s.selected.len()] {
            put(&mut b, v);
        }
        for &id in &s.selected {
            b.extend_from_slice(&id.to_le_bytes());
        }
    }
    b
}

pub fn write_all(bytes: &[u8], mut out: impl Write) -> Result<()> {
    out.write_all(bytes)?;
    Ok(())
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.data.len() - self.pos < n {
            return Err(Error::Format(format!(
                "unexpected end of mask data at byte {}",
                self.pos
            )));
        }
        self.pos += n;
        Ok(&self.data[self.pos - n..self.pos])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize> {
        self.u32().map(|v| v as usize)
    }
}

pub fn read_mask_file(data: &[u8]) -> Result<MaskFile> {
    let mut r = Reader { data, pos: 0 };
    if r.u32()? != RIPM_MAGIC {
        return Err(Error::Format("bad mask file magic".into()));
    }
    let version = u16::from_le_bytes(r.take(2)?.try_into().unwrap());
    if version != RIPM_VERSION {
        return Err(Error::Format(format!("unsupported mask file version {version}")));
    }
    let file = match r.take(1)?[0] {
        KIND_DENSE => {
            let window_start = r.u32()?;
            let n = r.u32()?;
            let cells = r.take(n as usize * n as usize)?.iter().map(|&v| v as i8).collect();
            MaskFile::Dense { window_start, n, cells }
        }
        KIND_SUPPORTS => {
            let window_start = r.u32()?;
            let n = r.usize()?;
            let mut rows = Vec::with_capacity(n.min(1 << 20));
            for _ in 0..n {
                let k = r.usize()?;
                rows.push((0..k).map(|_| r.u32()).collect::<Result<_>>()?);
            }
            MaskFile::RowSupports { window_start, rows }
        }
        KIND_PLAN => {
            let seq_len = r.u32()?;
            let params = NscaParams {
                block_size: r.usize()?,
                top_k: r.usize()?,
                local_kernel: r.usize()?,
                local_stride: r.usize()?,
            };
            let n = r.usize()?;
            let mut steps = Vec::with_capacity(n.min(1 << 20));
            for _ in 0..n {
                let step = r.usize()?;
                let valid_blocks = r.usize()?;
                let local = r.usize()?..r.usize()?;
                let k = r.usize()?;
                let selected = (0..k).map(|_| r.u32()).collect::<Result<_>>()?;
                steps.push(NscaStep {
                    step,
                    valid_blocks,
                    selected,
                    local,
                });
            }
            MaskFile::Plan { seq_len, params, steps }
        }
        k => return Err(Error::Format(format!("unknown mask file kind {k}"))),
    };
    if r.pos != data.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes in mask file",
            data.len() - r.pos
        )));
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attention::frontier_mask;
    use crate::tokenizer::FrontierSnapshot;

    fn mask() -> FrontierMask {
        let s: Vec<_> = [0, 0, 0, 1, 1, 2]
            .iter()
            .enumerate()
            .map(|(i, &h)| FrontierSnapshot {
                head: h,
                face: i as u32,
            })
            .collect();
        frontier_mask(&s, 2..6)
    }

    #[test]
    fn dense_layout() {
        let m = mask();
        let b = dense_bytes(&m);
        assert_eq!(&b[..7], &[0x4D, 0x50, 0x49, 0x52, 1, 0, 1]);
        assert_eq!(b.len(), 7 + 8 + 16);
        match read_mask_file(&b).unwrap() {
            MaskFile::Dense { window_start, n, cells } => {
                assert_eq!((window_start, n), (2, 4));
                assert_eq!(cells, m.to_i8());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn supports_round_trip() {
        let m = mask();
        match read_mask_file(&supports_bytes(&m)).unwrap() {
            MaskFile::RowSupports { window_start, rows } => {
                assert_eq!(window_start, 2);
                assert_eq!(rows, vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 1, 2, 3]]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn plan_round_trip() {
        let steps = vec![
            NscaStep {
                step: 0,
                valid_blocks: 0,
                selected: vec![],
                local: 0..0,
            },
            NscaStep {
                step: 70,
                valid_blocks: 1,
                selected: vec![0],
                local: 48..70,
            },
        ];
        let b = plan_bytes(130, NscaParams::default(), &steps);
        assert_eq!(
            read_mask_file(&b).unwrap(),
            MaskFile::Plan {
                seq_len: 130,
                params: NscaParams::default(),
                steps
            }
        );
        assert!(read_mask_file(&b[..b.len() - 2]).is_err());
    }
}
