//! Text file formats for frames, operators and sampled functions.
//!
//! Documents are JSON with complex entries written as two-element arrays
//! `[re, im]` of decimal doubles. Serialization uses the shortest decimal
//! representation that round-trips, so `parse(serialize(x))` reproduces
//! `x` bit for bit, and `serialize(parse(text))` reproduces canonical
//! `text` byte for byte. Validation failures carry the path of the
//! offending field.
//!
//! A frame document stores the algebra blocks, the ambient rank, an
//! optional module projection (absent for free modules) and the list of
//! frame vectors; a sampled-function document stores the grid resolution,
//! the support start in whole periods and the samples.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElement, AlgebraDescriptor};
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::CMatrix;
use crate::matrix::AlgMatrix;
use crate::module::{HilbertModule, ModuleVector};
use crate::operator::ModuleOperator;
use crate::wavelet::SampledFunction;

/// A complex number as `[re, im]`.
pub type ComplexPair = (f64, f64);
/// One matrix block, row-major.
pub type BlockData = Vec<Vec<ComplexPair>>;
/// One algebra element: a matrix per block.
pub type ElementData = Vec<BlockData>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraFile {
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FrameFile {
    pub algebra: AlgebraFile,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<Vec<Vec<ElementData>>>,
    pub vectors: Vec<Vec<ElementData>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OperatorFile {
    pub algebra: AlgebraFile,
    pub source_rank: usize,
    pub target_rank: usize,
    pub entries: Vec<Vec<ElementData>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SampledFunctionFile {
    pub samples_per_unit: usize,
    pub support_start: i64,
    pub samples: Vec<ComplexPair>,
}

fn validation(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Validation {
        path: path.into(),
        reason: reason.into(),
    }
}

pub fn element_to_data(e: &AlgElement) -> ElementData {
    e.blocks()
        .iter()
        .map(|m| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| (m[(r, c)].re, m[(r, c)].im)).collect())
                .collect()
        })
        .collect()
}

pub fn element_from_data(
    descriptor: &AlgebraDescriptor,
    data: &ElementData,
    path: &str,
) -> Result<AlgElement> {
    if data.len() != descriptor.block_count() {
        return Err(validation(
            path,
            format!(
                "expected {} blocks, found {}",
                descriptor.block_count(),
                data.len()
            ),
        ));
    }
    let mut blocks = Vec::with_capacity(data.len());
    for (k, (block, &d)) in data.iter().zip(descriptor.blocks()).enumerate() {
        if block.len() != d || block.iter().any(|row| row.len() != d) {
            return Err(validation(
                format!("{path}.blocks[{k}]"),
                format!("block must be {d}x{d}"),
            ));
        }
        let mut m = CMatrix::zeros(d, d);
        for (r, row) in block.iter().enumerate() {
            for (c, &(re, im)) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(validation(
                        format!("{path}.blocks[{k}][{r}][{c}]"),
                        "entries must be finite",
                    ));
                }
                m[(r, c)] = Complex64::new(re, im);
            }
        }
        blocks.push(m);
    }
    AlgElement::from_blocks(descriptor.clone(), blocks)
}

fn matrix_to_data(m: &AlgMatrix) -> Vec<Vec<ElementData>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| element_to_data(m.entry(i, j))).collect())
        .collect()
}

fn matrix_from_data(
    descriptor: &AlgebraDescriptor,
    rows: usize,
    cols: usize,
    data: &[Vec<ElementData>],
    path: &str,
) -> Result<AlgMatrix> {
    if data.len() != rows || data.iter().any(|row| row.len() != cols) {
        return Err(validation(path, format!("matrix must be {rows}x{cols}")));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            entries.push(element_from_data(
                descriptor,
                e,
                &format!("{path}[{i}][{j}]"),
            )?);
        }
    }
    AlgMatrix::from_entries(descriptor, rows, cols, entries)
}

pub fn frame_to_file(frame: &Frame) -> FrameFile {
    let module = frame.module();
    FrameFile {
        algebra: AlgebraFile {
            blocks: module.algebra().blocks().to_vec(),
        },
        rank: module.rank(),
        projection: module.projection_ref().map(matrix_to_data),
        vectors: frame
            .elements()
            .iter()
            .map(|x| x.coords().iter().map(element_to_data).collect())
            .collect(),
    }
}

pub fn frame_from_file(file: &FrameFile, tol: f64) -> Result<Frame> {
    let descriptor = AlgebraDescriptor::new(file.algebra.blocks.clone())
        .map_err(|e| validation("algebra.blocks", e.to_string()))?;
    let module = match &file.projection {
        None => HilbertModule::free(descriptor.clone(), file.rank),
        Some(p) => {
            let matrix = matrix_from_data(&descriptor, file.rank, file.rank, p, "projection")?;
            HilbertModule::summand_with_tol(descriptor.clone(), file.rank, matrix, tol)
                .map_err(|e| validation("projection", e.to_string()))?
        }
    };
    let mut elements = Vec::with_capacity(file.vectors.len());
    for (j, coords_data) in file.vectors.iter().enumerate() {
        if coords_data.len() != file.rank {
            return Err(validation(
                format!("vectors[{j}]"),
                format!("expected {} coordinates, found {}", file.rank, coords_data.len()),
            ));
        }
        let coords = coords_data
            .iter()
            .enumerate()
            .map(|(i, e)| element_from_data(&descriptor, e, &format!("vectors[{j}][{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let vector = ModuleVector::with_tol(module.clone(), coords, tol).map_err(|e| match e {
            Error::OutsideModule { defect, .. } => Error::OutsideModule { index: j, defect },
            other => validation(format!("vectors[{j}]"), other.to_string()),
        })?;
        elements.push(vector);
    }
    Frame::with_tol(module, elements, tol)
}

pub fn operator_to_file(op: &ModuleOperator) -> OperatorFile {
    OperatorFile {
        algebra: AlgebraFile {
            blocks: op.source().algebra().blocks().to_vec(),
        },
        source_rank: op.source().rank(),
        target_rank: op.target().rank(),
        entries: matrix_to_data(op.matrix()),
    }
}

pub fn sampled_function_to_file(f: &SampledFunction) -> SampledFunctionFile {
    SampledFunctionFile {
        samples_per_unit: f.samples_per_unit(),
        support_start: f.support_start(),
        samples: f.samples().iter().map(|z| (z.re, z.im)).collect(),
    }
}

pub fn sampled_function_from_file(file: &SampledFunctionFile) -> Result<SampledFunction> {
    for (i, &(re, im)) in file.samples.iter().enumerate() {
        if !re.is_finite() || !im.is_finite() {
            return Err(validation(format!("samples[{i}]"), "entries must be finite"));
        }
    }
    SampledFunction::new(
        file.samples_per_unit,
        file.support_start,
        file.samples.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
    )
}

/// Canonical text form: pretty-printed JSON with a trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn write_frame(path: &Path, frame: &Frame) -> Result<()> {
    let file = frame_to_file(frame);
    std::fs::write(path, canonical_json(&file)?)?;
    Ok(())
}

pub fn read_frame(path: &Path, tol: f64) -> Result<Frame> {
    let text = std::fs::read_to_string(path)?;
    let file: FrameFile = serde_json::from_str(&text)?;
    frame_from_file(&file, tol)
}

pub fn read_sampled_function(path: &Path) -> Result<SampledFunction> {
    let text = std::fs::read_to_string(path)?;
    let file: SampledFunctionFile = serde_json::from_str(&text)?;
    sampled_function_from_file(&file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn round_trip_is_bit_exact() {
        let alg = AlgebraDescriptor::new(vec![2, 1]).unwrap();
        let mut rng = fixture::rng(101);
        let frame = fixture::random_standard_frame(&alg, 4, &mut rng);
        let file = frame_to_file(&frame);
        let text = canonical_json(&file).unwrap();
        let parsed: FrameFile = serde_json::from_str(&text).unwrap();
        assert_eq!(file, parsed);
        assert_eq!(canonical_json(&parsed).unwrap(), text);

        let back = frame_from_file(&parsed, 1e-9).unwrap();
        for (a, b) in back.elements().iter().zip(frame.elements()) {
            assert_eq!(a.coords(), b.coords());
        }
    }

    #[test]
    fn vector_outside_projection_names_the_index() {
        let alg = AlgebraDescriptor::scalar();
        let mut rng = fixture::rng(5);
        let frame = fixture::random_snt_frame(&alg, 3, &mut rng);
        let mut file = frame_to_file(&frame);
        // corrupt the second vector so it leaves the module
        file.vectors[1][0][0][0][0].0 += 1.0;
        match frame_from_file(&file, 1e-9) {
            Err(Error::OutsideModule { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected OutsideModule, got {other:?}"),
        }
    }

    #[test]
    fn shape_violations_carry_paths() {
        let alg = AlgebraDescriptor::new(vec![2]).unwrap();
        let h = HilbertModule::free(alg.clone(), 2);
        let frame = Frame::new(h.clone(), h.standard_basis()).unwrap();
        let mut file = frame_to_file(&frame);
        file.vectors[0][0][0].pop();
        match frame_from_file(&file, 1e-9) {
            Err(Error::Validation { path, .. }) => assert!(path.contains("vectors[0]")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let alg = AlgebraDescriptor::scalar();
        let h = HilbertModule::free(alg, 1);
        let frame = Frame::new(h.clone(), h.standard_basis()).unwrap();
        let mut file = frame_to_file(&frame);
        file.vectors[0][0][0][0][0].0 = f64::NAN;
        assert!(matches!(
            frame_from_file(&file, 1e-9),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn sampled_function_round_trip() {
        let f = SampledFunction::haar(8);
        let file = sampled_function_to_file(&f);
        let text = canonical_json(&file).unwrap();
        let parsed: SampledFunctionFile = serde_json::from_str(&text).unwrap();
        let back = sampled_function_from_file(&parsed).unwrap();
        assert_eq!(back, f);
    }
}
