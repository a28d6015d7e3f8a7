//! OBJ and ASCII PLY readers, OBJ writer.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::RawMesh;
use crate::error::{Error, Result};

/// Loads `.obj` or `.ply` by extension.
pub fn load(path: impl AsRef<Path>) -> Result<RawMesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let name = path.display().to_string();
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("obj") => parse_obj(&text, &name),
        Some("ply") => parse_ply(&text, &name),
        _ => Err(Error::InvalidConfig(format!(
            "{name}: unsupported mesh format (expected .obj or .ply)"
        ))),
    }
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_f64(tok: Option<&str>, path: &str, line: usize) -> Result<f64> {
    tok.ok_or_else(|| parse_err(path, line, "missing coordinate"))?
        .parse()
        .map_err(|_| parse_err(path, line, "bad coordinate"))
}

/// Reads `v` and `f` records. Polygons are fan-triangulated; texture and
/// normal indices are ignored; negative indices count from the end.
pub fn parse_obj(text: &str, path: &str) -> Result<RawMesh> {
    let mut mesh = RawMesh::default();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let x = parse_f64(toks.next(), path, lineno)?;
                let y = parse_f64(toks.next(), path, lineno)?;
                let z = parse_f64(toks.next(), path, lineno)?;
                mesh.vertices.push([x, y, z]);
            }
            Some("f") => {
                let n = mesh.vertices.len() as i64;
                let idx = toks
                    .map(|t| {
                        let head = t.split('/').next().unwrap_or("");
                        let v: i64 = head
                            .parse()
                            .map_err(|_| parse_err(path, lineno, format!("bad index {t:?}")))?;
                        let v = if v < 0 { n + v } else { v - 1 };
                        if v < 0 || v >= n {
                            return Err(parse_err(path, lineno, format!("index {t} out of range")));
                        }
                        Ok(v as u32)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if idx.len() < 3 {
                    return Err(parse_err(path, lineno, "face with fewer than 3 vertices"));
                }
                for k in 1..idx.len() - 1 {
                    mesh.faces.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    Ok(mesh)
}

/// ASCII PLY with `vertex` (x, y, z among its properties) and `face`
/// (a list property) elements. Other elements are skipped.
pub fn parse_ply(text: &str, path: &str) -> Result<RawMesh> {
    struct Element {
        name: String,
        count: usize,
        props: Vec<String>,
    }

    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == "ply" => {}
        _ => return Err(parse_err(path, 1, "missing 'ply' magic")),
    }
    let mut elements: Vec<Element> = Vec::new();
    loop {
        let (i, line) = lines.next().ok_or_else(|| parse_err(path, 0, "unterminated header"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["format", fmt, ..] if *fmt != "ascii" => {
                return Err(parse_err(path, i + 1, format!("unsupported format {fmt}")))
            }
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count.parse().map_err(|_| parse_err(path, i + 1, "bad element count"))?,
                props: Vec::new(),
            }),
            ["property", .., name] => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(path, i + 1, "property before element"))?;
                el.props.push(name.to_string());
            }
            ["end_header"] => break,
            _ => {}
        }
    }

    let mut mesh = RawMesh::default();
    for el in &elements {
        for _ in 0..el.count {
            let (i, line) = lines
                .next()
                .ok_or_else(|| parse_err(path, 0, format!("missing {} records", el.name)))?;
            let lineno = i + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            match el.name.as_str() {
                "vertex" => {
                    let get = |name: &str| -> Result<f64> {
                        let k = el
                            .props
                            .iter()
                            .position(|p| p == name)
                            .ok_or_else(|| parse_err(path, lineno, format!("no {name} property")))?;
                        parse_f64(toks.get(k).copied(), path, lineno)
                    };
                    mesh.vertices.push([get("x")?, get("y")?, get("z")?]);
                }
                "face" => {
                    let n: usize = toks
                        .first()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| parse_err(path, lineno, "bad face record"))?;
                    let idx = toks
                        .get(1..1 + n)
                        .ok_or_else(|| parse_err(path, lineno, "short face record"))?
                        .iter()
                        .map(|t| t.parse::<u32>().map_err(|_| parse_err(path, lineno, "bad index")))
                        .collect::<Result<Vec<_>>>()?;
                    if n < 3 {
                        return Err(parse_err(path, lineno, "face with fewer than 3 vertices"));
                    }
                    for k in 1..n - 1 {
                        mesh.faces.push([idx[0], idx[k], idx[k + 1]]);
                    }
                }
                _ => {}
            }
        }
    }
    mesh.validate()?;
    Ok(mesh)
}

pub fn write_obj(mesh: &RawMesh, mut out: impl Write) -> Result<()> {
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

pub fn save_obj(mesh: &RawMesh, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    write_obj(mesh, std::io::BufWriter::new(file))
}
