//! Self-describing text containers for models, datasets, and probes.
//!
//! All three share one token grammar: whitespace-separated keywords and
//! numbers, `#` comments to end of line, fields in a fixed order.
//! Numbers are written as shortest round-trip decimals; readers also
//! accept C-style hex floats (`-0x1.8p-2`).
//!
//! ```text
//! portable-model                 portable-dataset            portable-probe
//! version 1                      version 1                   version 1
//! input_dim 4                    variables 2                 feature_dim 3
//! output_dim 2                   slices 2 2                  classes 2
//! layers 1                       baseline 0 0 0 0   # opt    W <6 numbers>
//! layer                          samples 1                   b <2 numbers>
//! rows 2                         sample 0 <4 numbers>
//! cols 4
//! activation identity
//! weights <8 numbers>
//! bias <2 numbers>
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{EvalError, Result};
use crate::model::{Activation, Layer, PortableModel};
use crate::probe::ProbeClassifier;
use crate::sample::{BaselineVector, Dataset, Sample};

pub const MODEL_MAGIC: &str = "portable-model";
pub const DATASET_MAGIC: &str = "portable-dataset";
pub const PROBE_MAGIC: &str = "portable-probe";
pub const TEXT_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

struct Tokens {
    items: Vec<(String, u32)>,
    pos: usize,
    last_line: u32,
}

impl Tokens {
    fn new(text: &str) -> Self {
        let mut items = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            let line = (i + 1) as u32;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("");
            for tok in content.split_whitespace() {
                items.push((tok.to_string(), line));
            }
        }
        Self {
            items,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self) -> Result<(&str, u32)> {
        match self.items.get(self.pos) {
            Some((tok, line)) => {
                self.pos += 1;
                Ok((tok.as_str(), *line))
            }
            None => Err(EvalError::parse(self.last_line, "unexpected end of file")),
        }
    }

    fn peek(&self) -> Option<&str> {
        self.items.get(self.pos).map(|(t, _)| t.as_str())
    }

    fn expect(&mut self, keyword: &str) -> Result<u32> {
        let (tok, line) = self.next()?;
        if tok != keyword {
            return Err(EvalError::parse(
                line,
                format!("expected '{keyword}', found '{tok}'"),
            ));
        }
        Ok(line)
    }

    fn usize_field(&mut self, keyword: &str) -> Result<usize> {
        self.expect(keyword)?;
        let (tok, line) = self.next()?;
        tok.parse()
            .map_err(|_| EvalError::parse(line, format!("invalid count '{tok}' for '{keyword}'")))
    }

    fn f64_value(&mut self) -> Result<f64> {
        let (tok, line) = self.next()?;
        parse_number(tok).ok_or_else(|| EvalError::parse(line, format!("invalid number '{tok}'")))
    }

    fn f64_block(&mut self, count: usize) -> Result<Vec<f64>> {
        (0..count).map(|_| self.f64_value()).collect()
    }

    fn finish(&mut self) -> Result<()> {
        if let Some((tok, line)) = self.items.get(self.pos) {
            return Err(EvalError::parse(
                *line,
                format!("trailing content starting at '{tok}'"),
            ));
        }
        Ok(())
    }
}

/// Decimal or C-style hex-float literal.
pub fn parse_number(tok: &str) -> Option<f64> {
    let body = tok.strip_prefix(['+', '-']).unwrap_or(tok);
    if body.starts_with("0x") || body.starts_with("0X") {
        parse_hex_float(tok)
    } else {
        tok.parse::<f64>().ok()
    }
}

fn parse_hex_float(tok: &str) -> Option<f64> {
    let (sign, rest) = match tok.as_bytes().first()? {
        b'+' => (1.0, &tok[1..]),
        b'-' => (-1.0, &tok[1..]),
        _ => (1.0, tok),
    };
    let rest = rest
        .strip_prefix("0x")
        .or_else(|| rest.strip_prefix("0X"))?;
    let (mantissa, exp) = match rest.split_once(['p', 'P']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let mut value = 0.0f64;
    for c in int_part.chars() {
        value = value * 16.0 + f64::from(c.to_digit(16)?);
    }
    let mut scale = 0i32;
    for c in frac_part.chars() {
        value = value * 16.0 + f64::from(c.to_digit(16)?);
        scale -= 4;
    }
    Some(sign * mul_pow2(value, exp.saturating_add(scale)))
}

/// `v * 2^e` in chunks, so exponents past the `powi` range still reach
/// subnormals (or saturate) instead of collapsing through 1/inf.
fn mul_pow2(mut v: f64, e: i32) -> f64 {
    let mut e = e.clamp(-2200, 2200);
    while e > 1023 {
        v *= 2f64.powi(1023);
        e -= 1023;
    }
    while e < -1023 {
        v *= 2f64.powi(-1023);
        e += 1023;
    }
    v * 2f64.powi(e)
}

fn check_version(tokens: &mut Tokens) -> Result<()> {
    let version = tokens.usize_field("version")?;
    if version != TEXT_VERSION as usize {
        return Err(EvalError::parse(
            0,
            format!("unsupported container version {version}"),
        ));
    }
    Ok(())
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// Model container
// ---------------------------------------------------------------------------

pub fn write_model(w: &mut impl Write, model: &PortableModel) -> Result<()> {
    writeln!(w, "{MODEL_MAGIC}")?;
    writeln!(w, "version {TEXT_VERSION}")?;
    writeln!(w, "input_dim {}", model.input_dim())?;
    writeln!(w, "output_dim {}", model.output_dim())?;
    writeln!(w, "layers {}", model.layers().len())?;
    for layer in model.layers() {
        writeln!(w, "layer")?;
        writeln!(w, "rows {}", layer.rows)?;
        writeln!(w, "cols {}", layer.cols)?;
        writeln!(w, "activation {}", layer.activation.as_str())?;
        writeln!(w, "weights")?;
        for r in 0..layer.rows {
            writeln!(
                w,
                "{}",
                join(&layer.weights[r * layer.cols..(r + 1) * layer.cols])
            )?;
        }
        writeln!(w, "bias {}", join(&layer.bias))?;
    }
    Ok(())
}

pub fn read_model(text: &str) -> Result<PortableModel> {
    let mut t = Tokens::new(text);
    t.expect(MODEL_MAGIC)?;
    check_version(&mut t)?;
    let input_dim = t.usize_field("input_dim")?;
    let output_dim = t.usize_field("output_dim")?;
    let layer_count = t.usize_field("layers")?;

    let mut layers = Vec::with_capacity(layer_count);
    for _ in 0..layer_count {
        t.expect("layer")?;
        let rows = t.usize_field("rows")?;
        let cols = t.usize_field("cols")?;
        let act_line = t.expect("activation")?;
        let (act_tok, _) = t.next()?;
        let activation = Activation::parse(act_tok)
            .ok_or_else(|| EvalError::parse(act_line, format!("unknown activation '{act_tok}'")))?;
        t.expect("weights")?;
        let weights = t.f64_block(rows * cols)?;
        t.expect("bias")?;
        let bias = t.f64_block(rows)?;
        layers.push(Layer::new(rows, cols, weights, bias, activation)?);
    }
    t.finish()?;

    let model = PortableModel::new(layers)?;
    if model.input_dim() != input_dim {
        return Err(EvalError::parse(
            0,
            format!(
                "declared input_dim {input_dim} but layers start at {}",
                model.input_dim()
            ),
        ));
    }
    if model.output_dim() != output_dim {
        return Err(EvalError::parse(
            0,
            format!(
                "declared output_dim {output_dim} but layers end at {}",
                model.output_dim()
            ),
        ));
    }
    Ok(model)
}

// ---------------------------------------------------------------------------
// Dataset container
// ---------------------------------------------------------------------------

pub fn write_dataset(w: &mut impl Write, dataset: &Dataset) -> Result<()> {
    writeln!(w, "{DATASET_MAGIC}")?;
    writeln!(w, "version {TEXT_VERSION}")?;
    writeln!(w, "variables {}", dataset.n_variables())?;
    writeln!(
        w,
        "slices {}",
        dataset
            .widths()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    )?;
    if let Some(b) = dataset.baseline_override() {
        writeln!(w, "baseline {}", join(&b.concat()))?;
    }
    writeln!(w, "samples {}", dataset.samples().len())?;
    for s in dataset.samples() {
        writeln!(w, "sample {} {}", s.label(), join(&s.concat()))?;
    }
    Ok(())
}

pub fn read_dataset(text: &str) -> Result<Dataset> {
    let mut t = Tokens::new(text);
    t.expect(DATASET_MAGIC)?;
    check_version(&mut t)?;
    let variables = t.usize_field("variables")?;
    t.expect("slices")?;
    let mut widths = Vec::with_capacity(variables);
    for _ in 0..variables {
        let (tok, line) = t.next()?;
        let w: usize = tok
            .parse()
            .map_err(|_| EvalError::parse(line, format!("invalid slice width '{tok}'")))?;
        widths.push(w);
    }
    let input_dim: usize = widths.iter().sum();

    let baseline = if t.peek() == Some("baseline") {
        t.expect("baseline")?;
        let flat = t.f64_block(input_dim)?;
        Some(BaselineVector::from_concat(&flat, &widths)?)
    } else {
        None
    };

    let count = t.usize_field("samples")?;
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        t.expect("sample")?;
        let (tok, line) = t.next()?;
        let label: usize = tok
            .parse()
            .map_err(|_| EvalError::parse(line, format!("invalid label '{tok}'")))?;
        let flat = t.f64_block(input_dim)?;
        samples.push(Sample::from_concat(&flat, &widths, label)?);
    }
    t.finish()?;
    Dataset::new(widths, samples, baseline)
}

// ---------------------------------------------------------------------------
// Probe container
// ---------------------------------------------------------------------------

pub fn write_probe(w: &mut impl Write, probe: &ProbeClassifier) -> Result<()> {
    writeln!(w, "{PROBE_MAGIC}")?;
    writeln!(w, "version {TEXT_VERSION}")?;
    writeln!(w, "feature_dim {}", probe.feature_dim())?;
    writeln!(w, "classes {}", probe.classes())?;
    writeln!(w, "W")?;
    for c in 0..probe.classes() {
        writeln!(
            w,
            "{}",
            join(&probe.weights()[c * probe.feature_dim()..(c + 1) * probe.feature_dim()])
        )?;
    }
    writeln!(w, "b {}", join(probe.bias()))?;
    Ok(())
}

pub fn read_probe(text: &str) -> Result<ProbeClassifier> {
    let mut t = Tokens::new(text);
    t.expect(PROBE_MAGIC)?;
    check_version(&mut t)?;
    let feature_dim = t.usize_field("feature_dim")?;
    let classes = t.usize_field("classes")?;
    t.expect("W")?;
    let weights = t.f64_block(classes * feature_dim)?;
    t.expect("b")?;
    let bias = t.f64_block(classes)?;
    t.finish()?;
    ProbeClassifier::new(classes, feature_dim, weights, bias)
}

// ---------------------------------------------------------------------------
// Path helpers
// ---------------------------------------------------------------------------

pub fn read_model_file(path: &Path) -> Result<PortableModel> {
    read_model(&fs::read_to_string(path)?)
}

pub fn write_model_file(path: &Path, model: &PortableModel) -> Result<()> {
    let mut buf = Vec::new();
    write_model(&mut buf, model)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_dataset_file(path: &Path) -> Result<Dataset> {
    read_dataset(&fs::read_to_string(path)?)
}

pub fn write_dataset_file(path: &Path, dataset: &Dataset) -> Result<()> {
    let mut buf = Vec::new();
    write_dataset(&mut buf, dataset)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_probe_file(path: &Path) -> Result<ProbeClassifier> {
    read_probe(&fs::read_to_string(path)?)
}

pub fn write_probe_file(path: &Path, probe: &ProbeClassifier) -> Result<()> {
    let mut buf = Vec::new();
    write_probe(&mut buf, probe)?;
    fs::write(path, buf)?;
    Ok(())
}
