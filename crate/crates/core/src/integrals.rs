//! Molecular integrals in FCIDUMP form.
//!
//! FCIDUMP files carry chemists'-notation two-electron integrals `(ij|kl)`,
//! one-electron integrals `h_ij` and the core energy, with 1-based orbital
//! labels. Only real, spin-restricted files are accepted.

use std::fmt::Write as _;
use std::path::Path;

use crate::combinadics::{SectorShape, Spin};
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;

/// Spatial-orbital integrals and target particle numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralSet {
    norb: usize,
    n_up: usize,
    n_down: usize,
    h1: Vec<f64>,
    h2: Vec<f64>,
    e_core: f64,
}

impl IntegralSet {
    /// All-zero integrals for `norb` orbitals.
    pub fn zeros(norb: usize, n_up: usize, n_down: usize) -> Self {
        Self {
            norb,
            n_up,
            n_down,
            h1: vec![0.0; norb * norb],
            h2: vec![0.0; norb.pow(4)],
            e_core: 0.0,
        }
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn n_down(&self) -> usize {
        self.n_down
    }

    pub fn e_core(&self) -> f64 {
        self.e_core
    }

    pub fn set_e_core(&mut self, e_core: f64) {
        self.e_core = e_core;
    }

    pub fn shape(&self) -> Result<SectorShape> {
        SectorShape::new(self.norb, self.n_up, self.n_down)
    }

    #[inline]
    pub fn h1(&self, i: usize, j: usize) -> f64 {
        self.h1[i * self.norb + j]
    }

    /// Chemists' `(ij|kl)`.
    #[inline]
    pub fn h2(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.norb;
        self.h2[((i * n + j) * n + k) * n + l]
    }

    /// Sets `h_ij` and `h_ji`.
    pub fn set_h1(&mut self, i: usize, j: usize, v: f64) {
        let n = self.norb;
        self.h1[i * n + j] = v;
        self.h1[j * n + i] = v;
    }

    /// Sets `(ij|kl)` and its seven symmetry partners.
    pub fn set_h2(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let n = self.norb;
        for (a, b, c, d) in [
            (i, j, k, l),
            (j, i, k, l),
            (i, j, l, k),
            (j, i, l, k),
            (k, l, i, j),
            (l, k, i, j),
            (k, l, j, i),
            (l, k, j, i),
        ] {
            self.h2[((a * n + b) * n + c) * n + d] = v;
        }
    }

    /// Largest violation of the `h1` and 8-fold `h2` permutational symmetries.
    pub fn symmetry_violation(&self) -> f64 {
        let n = self.norb;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.h1(i, j) - self.h1(j, i)).abs());
                for k in 0..n {
                    for l in 0..n {
                        let v = self.h2(i, j, k, l);
                        worst = worst
                            .max((v - self.h2(j, i, k, l)).abs())
                            .max((v - self.h2(i, j, l, k)).abs())
                            .max((v - self.h2(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        parse_fcidump(&text)
    }

    /// FCIDUMP text with unique integrals only (`i >= j`, `k >= l`, `ij >= kl`),
    /// values in shortest round-trip exponent form.
    pub fn to_fcidump(&self) -> String {
        let n = self.norb;
        let mut out = String::new();
        let orbsym = vec!["1"; n].join(",");
        let _ = writeln!(
            out,
            " &FCI NORB={n},NELEC={},MS2={},\n  ORBSYM={orbsym},\n  ISYM=1,\n &END",
            self.n_up + self.n_down,
            self.n_up as i64 - self.n_down as i64
        );
        for i in 0..n {
            for j in 0..=i {
                for k in 0..n {
                    for l in 0..=k {
                        if i * (i + 1) / 2 + j < k * (k + 1) / 2 + l {
                            continue;
                        }
                        let v = self.h2(i, j, k, l);
                        if v != 0.0 {
                            let _ = writeln!(out, "{v:e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let v = self.h1(i, j);
                if v != 0.0 {
                    let _ = writeln!(out, "{v:e} {} {} 0 0", i + 1, j + 1);
                }
            }
        }
        let _ = writeln!(out, "{:e} 0 0 0 0", self.e_core);
        out
    }

    /// Spin-orbital coefficients of the second-quantized Hamiltonian.
    pub fn to_physicist_coefficients(&self) -> SpinOrbitalCoefficients<'_> {
        SpinOrbitalCoefficients { ints: self }
    }

    /// Closed-shell-style Fock diagonal for one spin channel, using the
    /// lowest-orbital reference occupation of each sector.
    pub fn fock_diagonal(&self, spin: Spin) -> Vec<f64> {
        let (same, other) = match spin {
            Spin::Up => (self.n_up, self.n_down),
            Spin::Down => (self.n_down, self.n_up),
        };
        (0..self.norb)
            .map(|p| {
                let mut f = self.h1(p, p);
                for k in 0..same {
                    f += self.h2(p, p, k, k) - self.h2(p, k, k, p);
                }
                for k in 0..other {
                    f += self.h2(p, p, k, k);
                }
                f
            })
            .collect()
    }
}

/// View of an [`IntegralSet`] as the spin-orbital coefficients `h_pq` and
/// `h_pqrs` of
///
/// `H = Σ_pq (h_pq E_pq + h_pq* E_qp) + ½ Σ_pqrs [h_pqrs (E_pq E_rs − δ_qr E_ps) + H.C.] + E_core`.
///
/// Spin orbitals use block ordering (spin-down `0..M`, spin-up `M..2M`).
/// With both the explicit conjugate terms and the ½ in place, `h_pq = h1/2`
/// and `h_pqrs = (pq|rs)/2` reproduce the standard electronic Hamiltonian.
/// Spin-forbidden entries are zero.
#[derive(Clone, Copy, Debug)]
pub struct SpinOrbitalCoefficients<'a> {
    ints: &'a IntegralSet,
}

impl SpinOrbitalCoefficients<'_> {
    pub fn spin_orbitals(&self) -> usize {
        2 * self.ints.norb
    }

    pub fn e_core(&self) -> f64 {
        self.ints.e_core
    }

    #[inline]
    fn split(&self, p: usize) -> (usize, usize) {
        let m = self.ints.norb;
        (p / m, p % m)
    }

    #[inline]
    pub fn one_body(&self, p: usize, q: usize) -> f64 {
        let ((sp, a), (sq, b)) = (self.split(p), self.split(q));
        if sp != sq {
            return 0.0;
        }
        0.5 * self.ints.h1(a, b)
    }

    #[inline]
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let ((sp, a), (sq, b)) = (self.split(p), self.split(q));
        let ((sr, c), (ss, d)) = (self.split(r), self.split(s));
        if sp != sq || sr != ss {
            return 0.0;
        }
        0.5 * self.ints.h2(a, b, c, d)
    }

    /// Nonzero one-body coefficients `(p, q, h_pq)`.
    pub fn one_body_terms(&self) -> Vec<(usize, usize, f64)> {
        let n = self.spin_orbitals();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                let v = self.one_body(p, q);
                if v != 0.0 {
                    out.push((p, q, v));
                }
            }
        }
        out
    }

    /// Nonzero two-body coefficients `((p, q, r, s), h_pqrs)`.
    pub fn two_body_terms(&self) -> Vec<((usize, usize, usize, usize), f64)> {
        let n = self.spin_orbitals();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.two_body(p, q, r, s);
                        if v != 0.0 {
                            out.push(((p, q, r, s), v));
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Default)]
struct Header {
    norb: Option<usize>,
    nelec: Option<usize>,
    ms2: i64,
}

fn parse_header(text: &str, first_line: usize) -> Result<Header> {
    let mut header = Header::default();
    let body = text.replace(['\n', '\r'], " ");
    let body = body.trim();
    let body = body
        .strip_prefix("&FCI")
        .or_else(|| body.strip_prefix("&fci"))
        .unwrap_or(body);
    let mut key: Option<String> = None;
    let mut values: Vec<String> = Vec::new();
    let mut entries: Vec<(String, Vec<String>)> = Vec::new();
    for tok in body.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
        if let Some((k, v)) = tok.split_once('=') {
            if let Some(prev) = key.take() {
                entries.push((prev, std::mem::take(&mut values)));
            }
            key = Some(k.trim().to_ascii_uppercase());
            if !v.is_empty() {
                values.push(v.to_string());
            }
        } else if key.is_some() {
            values.push(tok.to_string());
        } else {
            return Err(Error::Parse {
                line: first_line,
                message: format!("unexpected header token {tok:?}"),
            });
        }
    }
    if let Some(prev) = key {
        entries.push((prev, values));
    }
    for (k, v) in entries {
        let scalar = |name: &str| -> Result<i64> {
            v.first()
                .and_then(|s| s.parse::<i64>().ok())
                .ok_or_else(|| Error::Parse {
                    line: first_line,
                    message: format!("header field {name} is not an integer"),
                })
        };
        match k.as_str() {
            "NORB" => {
                let n = scalar("NORB")?;
                if n <= 0 {
                    return Err(Error::Parse {
                        line: first_line,
                        message: "NORB must be positive".into(),
                    });
                }
                header.norb = Some(n as usize);
            }
            "NELEC" => {
                let n = scalar("NELEC")?;
                if n < 0 {
                    return Err(Error::Parse {
                        line: first_line,
                        message: "NELEC must be non-negative".into(),
                    });
                }
                header.nelec = Some(n as usize);
            }
            "MS2" => header.ms2 = scalar("MS2")?,
            "IUHF" if scalar("IUHF")? != 0 => {
                return Err(Error::Parse {
                    line: first_line,
                    message: "unrestricted (IUHF) integrals are not supported".into(),
                });
            }
            _ => {}
        }
    }
    Ok(header)
}

fn parse_value(tok: &str, line: usize) -> Result<f64> {
    if tok.contains('(') {
        return Err(Error::Parse {
            line,
            message: "complex integrals are not supported".into(),
        });
    }
    tok.replace(['D', 'd'], "e")
        .parse::<f64>()
        .map_err(|_| Error::Parse {
            line,
            message: format!("non-numeric integral value {tok:?}"),
        })
}

/// Parses Molpro-style FCIDUMP text.
pub fn parse_fcidump(text: &str) -> Result<IntegralSet> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| !l.trim().is_empty())
        .ok_or(Error::Parse {
            line: 1,
            message: "empty file".into(),
        })?;
    if !lines[start]
        .trim_start()
        .to_ascii_uppercase()
        .starts_with("&FCI")
    {
        return Err(Error::Parse {
            line: start + 1,
            message: "missing &FCI namelist header".into(),
        });
    }
    let end = lines[start..]
        .iter()
        .position(|l| {
            let t = l.trim().to_ascii_uppercase();
            t.ends_with("&END") || t == "/" || t.ends_with(" /") || t.ends_with(",/")
        })
        .map(|p| start + p)
        .ok_or(Error::Parse {
            line: start + 1,
            message: "unterminated namelist header".into(),
        })?;

    let mut header_text = lines[start..=end].join("\n");
    for terminator in ["&END", "&end", "/"] {
        if let Some(p) = header_text.rfind(terminator) {
            header_text.truncate(p);
            break;
        }
    }
    let header = parse_header(&header_text, start + 1)?;
    let norb = header.norb.ok_or(Error::Parse {
        line: start + 1,
        message: "header lacks NORB".into(),
    })?;
    let nelec = header.nelec.ok_or(Error::Parse {
        line: start + 1,
        message: "header lacks NELEC".into(),
    })?;
    let ms2 = header.ms2;
    if (nelec as i64 + ms2) % 2 != 0 || ms2.unsigned_abs() as usize > nelec {
        return Err(Error::Parse {
            line: start + 1,
            message: format!("inconsistent NELEC={nelec} and MS2={ms2}"),
        });
    }
    let n_up = ((nelec as i64 + ms2) / 2) as usize;
    let n_down = ((nelec as i64 - ms2) / 2) as usize;
    if n_up > norb || n_down > norb {
        return Err(Error::Parse {
            line: start + 1,
            message: format!("{nelec} electrons do not fit in {norb} orbitals"),
        });
    }

    let mut ints = IntegralSet::zeros(norb, n_up, n_down);
    for (offset, raw) in lines[end + 1..].iter().enumerate() {
        let line = end + 2 + offset;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(Error::Parse {
                line,
                message: format!("expected 5 columns, found {}", toks.len()),
            });
        }
        let value = parse_value(toks[0], line)?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&toks[1..]) {
            let v: i64 = tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("non-integer index {tok:?}"),
            })?;
            if v < 0 || v as usize > norb {
                return Err(Error::Parse {
                    line,
                    message: format!("index {v} outside 0..={norb}"),
                });
            }
            *slot = v as usize;
        }
        match idx {
            [0, 0, 0, 0] => ints.e_core = value,
            [i, j, 0, 0] if i > 0 && j > 0 => ints.set_h1(i - 1, j - 1, value),
            // orbital energies, not needed
            [i, 0, 0, 0] if i > 0 => {}
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                ints.set_h2(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("unrecognized index pattern {idx:?}"),
                })
            }
        }
    }
    debug_assert!(ints.symmetry_violation() <= SYMMETRY_TOL);
    Ok(ints)
}
