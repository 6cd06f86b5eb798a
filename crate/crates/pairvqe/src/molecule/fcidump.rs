//! Molpro-style FCIDUMP files.
//!
//! The header is a namelist `&FCI NORB=.., NELEC=.., MS2=.., ORBSYM=.., ISYM=.. &END`.
//! Each following record is `value i j k l` with 1-based indices:
//! all non-zero is (ij|kl), `i j 0 0` is h_ij, `i 0 0 0` is an orbital energy
//! (ignored) and `0 0 0 0` is the nuclear repulsion.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use super::{MolecularSystem, TwoElectron};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Fcidump { line, msg: msg.into() }
}

fn parse_float(tok: &str, line: usize) -> Result<f64> {
    tok.replace(['D', 'd'], "e")
        .parse::<f64>()
        .map_err(|_| err(line, format!("cannot parse number `{tok}`")))
}

struct Header {
    values: HashMap<String, Vec<String>>,
    body_start: usize,
}

fn parse_header(lines: &[&str]) -> Result<Header> {
    let start = lines
        .iter()
        .position(|l| !l.trim().is_empty())
        .ok_or_else(|| err(1, "empty input"))?;
    let first = lines[start].trim_start();
    if !first.to_ascii_uppercase().starts_with("&FCI") {
        return Err(err(start + 1, "header must start with &FCI"));
    }
    let mut text = String::new();
    let mut end = None;
    for (i, line) in lines.iter().enumerate().skip(start) {
        let mut l = line.trim().to_string();
        if i == start {
            l = l[4..].to_string();
        }
        let upper = l.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END").or_else(|| upper.find('/')) {
            text.push_str(&l[..pos]);
            end = Some(i + 1);
            break;
        }
        text.push_str(&l);
        text.push(' ');
    }
    let body_start = end.ok_or_else(|| err(lines.len(), "header not terminated by &END"))?;

    let mut values: HashMap<String, Vec<String>> = HashMap::new();
    let mut current: Option<String> = None;
    for tok in text.replace(',', " ").split_whitespace() {
        if let Some((k, v)) = tok.split_once('=') {
            let key = k.trim().to_ascii_uppercase();
            values.entry(key.clone()).or_default();
            if !v.is_empty() {
                values.get_mut(&key).unwrap().push(v.to_string());
            }
            current = Some(key);
        } else {
            let key = current.clone().ok_or_else(|| err(start + 1, format!("value `{tok}` without a key")))?;
            values.get_mut(&key).unwrap().push(tok.to_string());
        }
    }
    Ok(Header { values, body_start })
}

fn header_int(h: &Header, key: &str, line: usize) -> Result<Option<i64>> {
    match h.values.get(key).and_then(|v| v.first()) {
        None => Ok(None),
        Some(v) => v
            .parse::<i64>()
            .map(Some)
            .map_err(|_| err(line, format!("{key} is not an integer: `{v}`"))),
    }
}

pub fn parse_fcidump(text: &str) -> Result<MolecularSystem> {
    let lines: Vec<&str> = text.lines().collect();
    let header = parse_header(&lines)?;
    let hl = 1;
    let norb = header_int(&header, "NORB", hl)?.ok_or_else(|| err(hl, "NORB missing"))?;
    let nelec = header_int(&header, "NELEC", hl)?.ok_or_else(|| err(hl, "NELEC missing"))?;
    let ms2 = header_int(&header, "MS2", hl)?.unwrap_or(0);
    if norb <= 0 {
        return Err(err(hl, format!("NORB must be positive, got {norb}")));
    }
    if nelec < 0 || nelec % 2 != 0 {
        return Err(err(hl, format!("NELEC must be even and non-negative, got {nelec}")));
    }
    if ms2 != 0 {
        return Err(err(hl, format!("only closed shells are supported (MS2 = {ms2})")));
    }
    let n = norb as usize;
    let orbsym: Vec<u32> = match header.values.get("ORBSYM") {
        Some(v) if !v.is_empty() => v
            .iter()
            .map(|s| s.parse::<u32>().map_err(|_| err(hl, format!("bad ORBSYM entry `{s}`"))))
            .collect::<Result<_>>()?,
        _ => vec![1; n],
    };
    if orbsym.len() != n {
        return Err(err(hl, format!("ORBSYM has {} entries for NORB = {n}", orbsym.len())));
    }
    let isym = header_int(&header, "ISYM", hl)?.unwrap_or(1) as u32;

    let mut h = DMatrix::<f64>::zeros(n, n);
    let mut g = TwoElectron::zeros(n);
    let mut e_nuc = 0.0;
    for (i, raw) in lines.iter().enumerate().skip(header.body_start) {
        let lineno = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(err(lineno, format!("expected `value i j k l`, got {} fields", toks.len())));
        }
        let v = parse_float(toks[0], lineno)?;
        let mut idx = [0usize; 4];
        for (slot, t) in idx.iter_mut().zip(&toks[1..]) {
            let k: i64 = t.parse().map_err(|_| err(lineno, format!("bad index `{t}`")))?;
            if k < 0 || k > norb {
                return Err(err(lineno, format!("index {k} outside 0..={norb}")));
            }
            *slot = k as usize;
        }
        match idx {
            [0, 0, 0, 0] => e_nuc = v,
            [p, 0, 0, 0] if p > 0 => {}
            [p, q, 0, 0] if p > 0 && q > 0 => {
                h[(p - 1, q - 1)] = v;
                h[(q - 1, p - 1)] = v;
            }
            [p, q, r, s] if p > 0 && q > 0 && r > 0 && s > 0 => {
                g.set_symmetric(p - 1, q - 1, r - 1, s - 1, v);
            }
            _ => return Err(err(lineno, format!("unrecognised index pattern {idx:?}"))),
        }
    }
    let mut sys = MolecularSystem::new(nelec as usize, e_nuc, h, g)?;
    sys.orbsym = orbsym;
    sys.isym = isym;
    Ok(sys)
}

pub fn read_fcidump(path: impl AsRef<Path>) -> Result<MolecularSystem> {
    let text = std::fs::read_to_string(path)?;
    parse_fcidump(&text)
}

/// Serialises the integrals; exactly-zero entries are skipped and values carry
/// 17 significant digits, so parsing the output reproduces the data exactly.
pub fn write_fcidump(sys: &MolecularSystem) -> String {
    let n = sys.n_orbitals;
    let mut out = String::new();
    let _ = writeln!(out, " &FCI NORB={n},NELEC={},MS2=0,", sys.n_electrons);
    let syms: Vec<String> = sys.orbsym.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "  ORBSYM={},", syms.join(","));
    let _ = writeln!(out, "  ISYM={},", sys.isym);
    let _ = writeln!(out, " &END");
    let pair = |p: usize, q: usize| p * (p + 1) / 2 + q;
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for s in 0..=r {
                    if pair(p, q) < pair(r, s) {
                        continue;
                    }
                    let v = sys.g.get(p, q, r, s);
                    if v != 0.0 {
                        let _ = writeln!(out, "{v:.16e} {} {} {} {}", p + 1, q + 1, r + 1, s + 1);
                    }
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..=p {
            let v = sys.h[(p, q)];
            if v != 0.0 {
                let _ = writeln!(out, "{v:.16e} {} {} 0 0", p + 1, q + 1);
            }
        }
    }
    let _ = writeln!(out, "{:.16e} 0 0 0 0", sys.e_nuclear);
    out
}
