use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use nearcomp::analysis::EnvelopeEvaluator;
use nearcomp::{
    build, star, CodewordRecord, ConstructionParams, DjQuadratic, EnvelopeConfig, Modulation,
    Offset, Offset16, Offset64, OffsetKind, Permutation, Scale, Z4,
};
use serde::{Deserialize, Serialize};

/// On-disk form of one codeword: the parameters plus everything derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordFile {
    pub m: usize,
    pub modulation: Modulation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<OffsetKind>,
    pub pi: Vec<usize>,
    /// `c_0, …, c_{m−1}, c`
    pub c: Vec<u8>,
    /// `d1, d2, d3` and, for 64-QAM, `h1, h3`
    pub offset: Vec<u8>,
    pub components: BTreeMap<String, Vec<u8>>,
    pub scale: Scale,
    pub symbols: Vec<[i64; 2]>,
    pub primed_symbols: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_over_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmepr: Option<f64>,
}

fn z4s(v: &[i64]) -> Vec<Z4> {
    v.iter().map(|&x| Z4::new(x)).collect()
}

/// Assembles and validates parameters from raw CLI/file values.
pub fn params_from(
    m: usize,
    modulation: Modulation,
    kind: Option<OffsetKind>,
    pi: Option<Vec<usize>>,
    c: &[i64],
    offset: &[i64],
) -> Result<ConstructionParams> {
    if m <= 2 {
        bail!("constraint violated: m > 2 (got m = {m})");
    }
    let pi = match pi {
        Some(p) => {
            if p.len() != m {
                bail!(
                    "constraint violated: --pi needs {m} entries, got {}",
                    p.len()
                );
            }
            Permutation::new(p)?
        }
        None => Permutation::identity(m),
    };
    if c.len() != m + 1 {
        bail!(
            "constraint violated: --c needs m+1 = {} values, got {}",
            m + 1,
            c.len()
        );
    }
    let base = DjQuadratic::new(pi, z4s(&c[..m]), Z4::new(c[m]))?;
    let offset = match modulation {
        Modulation::Qam16 => {
            if offset.len() != 3 {
                bail!(
                    "constraint violated: 16-QAM offset is d1,d2,d3 (got {} values)",
                    offset.len()
                );
            }
            if kind.is_some() {
                bail!("constraint violated: --kind applies to 64-QAM only");
            }
            let o = z4s(offset);
            Offset::Qam16(Offset16::new(o[0], o[1], o[2])?)
        }
        Modulation::Qam64 => {
            if offset.len() != 5 {
                bail!(
                    "constraint violated: 64-QAM offset is d1,d2,d3,h1,h3 (got {} values)",
                    offset.len()
                );
            }
            let o = z4s(offset);
            let d = Offset16::new(o[0], o[1], o[2])?;
            match kind {
                Some(OffsetKind::Type1) => Offset::Qam64(Offset64::type1(d, o[3], o[4])?),
                Some(OffsetKind::Type2) => Offset::Qam64(Offset64::type2(d, o[3], o[4])?),
                None => bail!("constraint violated: 64-QAM requires --kind type1|type2"),
            }
        }
    };
    Ok(ConstructionParams::new(base, offset)?)
}

fn pairs(seq: &nearcomp::ComplexSequence) -> Vec<[i64; 2]> {
    seq.points().iter().map(|z| [z.re, z.im]).collect()
}

impl CodewordFile {
    pub fn from_record(rec: &CodewordRecord) -> CodewordFile {
        let p = &rec.params;
        let (kind, offset) = match p.offset {
            Offset::Qam16(o) => (None, vec![o.d1.value(), o.d2.value(), o.d3.value()]),
            Offset::Qam64(o) => (
                Some(o.kind),
                vec![
                    o.d.d1.value(),
                    o.d.d2.value(),
                    o.d.d3.value(),
                    o.h1.value(),
                    o.h3.value(),
                ],
            ),
        };
        let names: &[&str] = if rec.components.len() == 2 {
            &["D", "E"]
        } else {
            &["D", "F", "G"]
        };
        let components = names
            .iter()
            .zip(&rec.components)
            .map(|(n, s)| (n.to_string(), s.to_u8()))
            .collect();
        let mut c: Vec<u8> = p.base.linear().iter().map(|z| z.value()).collect();
        c.push(p.base.constant().value());
        CodewordFile {
            m: p.m(),
            modulation: p.offset.modulation(),
            kind,
            pi: p.pi().mapping().to_vec(),
            c,
            offset,
            components,
            scale: rec.sequence.scale(),
            symbols: pairs(&rec.sequence),
            primed_symbols: pairs(&rec.primed_sequence),
            star_over_n: None,
            pmepr: None,
        }
    }

    pub fn with_metrics(
        mut self,
        rec: &CodewordRecord,
        env: &mut EnvelopeEvaluator,
    ) -> Result<CodewordFile> {
        self.star_over_n = Some(star(&rec.sequence, &rec.primed_sequence)? / rec.n() as f64);
        self.pmepr = Some(env.pmepr(&rec.sequence)?);
        Ok(self)
    }

    pub fn params(&self) -> Result<ConstructionParams> {
        let wide = |v: &[u8]| v.iter().map(|&x| x as i64).collect::<Vec<_>>();
        params_from(
            self.m,
            self.modulation,
            self.kind,
            Some(self.pi.clone()),
            &wide(&self.c),
            &wide(&self.offset),
        )
        .context("codeword file parameters")
    }

    pub fn to_csv(&self) -> String {
        let names: Vec<&String> = self.components.keys().collect();
        let order: Vec<&String> = ["D", "E", "F", "G"]
            .iter()
            .filter_map(|k| names.iter().find(|n| n.as_str() == *k).copied())
            .collect();
        let mut out = String::from("index");
        for n in &order {
            out.push(',');
            out.push_str(n);
        }
        out.push_str(",re,im,primed_re,primed_im,denominator\n");
        let den = self.scale.denominator();
        for i in 0..self.symbols.len() {
            out.push_str(&i.to_string());
            for n in &order {
                out.push_str(&format!(",{}", self.components[*n][i]));
            }
            let [a, b] = self.symbols[i];
            let [c, d] = self.primed_symbols[i];
            out.push_str(&format!(",{a},{b},{c},{d},{den}\n"));
        }
        out
    }
}

/// Outcome of re-deriving a codeword file from its own parameters.
#[derive(Debug, Clone, Serialize)]
pub struct FileCheck {
    pub consistent: bool,
    pub within_bound: bool,
    pub mismatches: Vec<String>,
    pub star_over_n: f64,
    pub pmepr: f64,
    pub bound: f64,
}

pub fn check_file(file: &CodewordFile, cfg: EnvelopeConfig) -> Result<FileCheck> {
    let params = file.params()?;
    let rec = build(&params)?;
    let mut env = EnvelopeEvaluator::new(rec.n(), cfg)?;
    let fresh = CodewordFile::from_record(&rec).with_metrics(&rec, &mut env)?;
    let mut mismatches = Vec::new();
    if fresh.components != file.components {
        mismatches.push("components".to_string());
    }
    if fresh.scale != file.scale {
        mismatches.push("scale".to_string());
    }
    if fresh.symbols != file.symbols {
        mismatches.push("symbols".to_string());
    }
    if fresh.primed_symbols != file.primed_symbols {
        mismatches.push("primed_symbols".to_string());
    }
    let star_over_n = fresh.star_over_n.unwrap_or_default();
    let pmepr = fresh.pmepr.unwrap_or_default();
    for (name, stored, value) in [
        ("star_over_n", file.star_over_n, star_over_n),
        ("pmepr", file.pmepr, pmepr),
    ] {
        if let Some(s) = stored {
            if (s - value).abs() > 1e-9 * value.max(1.0) {
                mismatches.push(name.to_string());
            }
        }
    }
    let class = params.offset.class();
    let bound = class.exact_bound_f64();
    Ok(FileCheck {
        consistent: mismatches.is_empty(),
        within_bound: star_over_n <= bound + 1e-9 && pmepr <= star_over_n + 1e-9,
        mismatches,
        star_over_n,
        pmepr,
        bound,
    })
}
