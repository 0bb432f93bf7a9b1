//! Text format: a `B U domain` header line, then `B` rows of `U` entries
//! written as `re:im`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::{ChannelMatrix, Domain};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

pub fn write_channel(h: &ChannelMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", h.b(), h.u(), h.domain()).unwrap();
    for b in 0..h.b() {
        let row: Vec<String> = h
            .matrix()
            .row(b)
            .iter()
            .map(|z| format!("{:.16e}:{:.16e}", z.re, z.im))
            .collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn read_channel(text: &str) -> Result<ChannelMatrix> {
    let err = |line: usize, message: String| Error::ChannelFile { line, message };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());

    let (idx, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(err(idx + 1, format!("expected `B U domain`, got `{header}`")));
    }
    let parse_count = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| err(idx + 1, format!("invalid {what} `{s}`")))
    };
    let b = parse_count(fields[0], "B")?;
    let u = parse_count(fields[1], "U")?;
    let domain = match fields[2] {
        "antenna" => Domain::Antenna,
        "beamspace" => Domain::Beamspace,
        other => return Err(err(idx + 1, format!("unknown domain `{other}`"))),
    };
    if b == 0 || u == 0 {
        return Err(err(idx + 1, "B and U must be positive".into()));
    }

    let mut data = Vec::with_capacity(b * u);
    let mut rows = 0;
    for (idx, line) in lines {
        if rows == b {
            return Err(err(idx + 1, format!("more than {b} data rows")));
        }
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != u {
            return Err(err(idx + 1, format!("expected {u} entries, found {}", entries.len())));
        }
        for entry in entries {
            let (re, im) = entry
                .split_once(':')
                .ok_or_else(|| err(idx + 1, format!("entry `{entry}` is not `re:im`")))?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(idx + 1, format!("invalid number `{s}`")))
            };
            data.push(Complex64::new(parse(re)?, parse(im)?));
        }
        rows += 1;
    }
    if rows != b {
        return Err(err(text.lines().count(), format!("expected {b} data rows, found {rows}")));
    }
    let matrix = ComplexMatrix::new(b, u, data).map_err(|e| err(1, e.to_string()))?;
    ChannelMatrix::new(matrix, domain).map_err(|e| err(1, e.to_string()))
}

pub fn write_channel_file(path: impl AsRef<Path>, h: &ChannelMatrix) -> std::io::Result<()> {
    std::fs::write(path, write_channel(h))
}

pub fn read_channel_file(path: impl AsRef<Path>) -> std::result::Result<ChannelMatrix, Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(path)?;
    Ok(read_channel(&text)?)
}
