//! Segre types of 6×6 medium matrices and the metaclass they determine.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::{Complex, DMatrix, Matrix6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::{MediumTensor, SINGULAR_TOL};

type C64 = Complex<f64>;

/// Default eigenvalue clustering tolerance, relative to `‖M‖_F`.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Singular values below `RANK_TOL·σ_max` count as zero.
pub const RANK_TOL: f64 = 1e-8;
/// Skewon test tolerance used by [`metaclass_of`].
pub const SKEWON_TOL: f64 = 1e-9;
/// Coarse clustering passes; each is only accepted when the rank filtration confirms it.
const LOOSE_TOLS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegreOptions {
    pub cluster_tol: f64,
    pub rank_tol: f64,
}

impl Default for SegreOptions {
    fn default() -> Self {
        Self { cluster_tol: CLUSTER_TOL, rank_tol: RANK_TOL }
    }
}

/// Jordan structure of a real 6×6 matrix. Complex eigenvalues are listed
/// once, with positive imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SegreType {
    pub real_blocks: Vec<(f64, Vec<usize>)>,
    pub complex_blocks: Vec<(C64, Vec<usize>)>,
}

impl SegreType {
    /// All real block sizes, descending.
    pub fn real_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.real_blocks.iter().flat_map(|(_, b)| b.iter().copied()).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// All complex block sizes (one per conjugate pair), descending.
    pub fn complex_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.complex_blocks.iter().flat_map(|(_, b)| b.iter().copied()).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Same block sizes, ignoring eigenvalues.
    pub fn same_structure(&self, other: &SegreType) -> bool {
        self.real_sizes() == other.real_sizes() && self.complex_sizes() == other.complex_sizes()
    }

    /// Bracket label such as `[2 2bar 1 1bar]` or `[1 1 1 1 1 1]`.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.real_sizes().iter().map(|k| k.to_string()).collect();
        for k in self.complex_sizes() {
            parts.push(format!("{k} {k}bar"));
        }
        format!("[{}]", parts.join(" "))
    }

    pub fn total_dimension(&self) -> usize {
        self.real_sizes().iter().sum::<usize>() + 2 * self.complex_sizes().iter().sum::<usize>()
    }
}

impl fmt::Display for SegreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn segre_type(mat: &Matrix6<f64>) -> Result<SegreType> {
    segre_type_with(mat, &SegreOptions::default())
}

/// Eigenvalues are grouped by single-linkage clustering and each group's
/// block sizes are read off the kernel dimensions of `(M − μ)^k`. A coarse
/// grouping is tried first because defective eigenvalues split by roughly
/// `ε^{1/b}` for a block of size `b`; when the rank filtration does not
/// confirm it, the fine tolerance is used and ambiguity is reported.
pub fn segre_type_with(mat: &Matrix6<f64>, opts: &SegreOptions) -> Result<SegreType> {
    let norm = mat.norm();
    if norm == 0.0 {
        return Ok(SegreType { real_blocks: vec![(0.0, vec![1; 6])], complex_blocks: Vec::new() });
    }
    let eig: Vec<C64> = mat.complex_eigenvalues().iter().copied().collect();

    for loose in LOOSE_TOLS {
        let coarse = cluster(&eig, loose * norm);
        if let Some(blocks) = analyze_clusters(mat, &eig, &coarse, norm, opts, true) {
            return Ok(assemble(blocks, loose * norm));
        }
    }

    let tol = opts.cluster_tol * norm;
    let fine = cluster(&eig, tol);
    let centers: Vec<C64> = fine.iter().map(|c| mean(&eig, c)).collect();
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let gap = (centers[i] - centers[j]).norm();
            if gap < 10.0 * tol {
                return Err(Error::IllConditioned(format!(
                    "eigenvalue clusters {} and {} are {gap:.3e} apart",
                    fmt_c(centers[i]),
                    fmt_c(centers[j])
                )));
            }
        }
    }
    match analyze_clusters(mat, &eig, &fine, norm, opts, false) {
        Some(blocks) => Ok(assemble(blocks, tol)),
        None => Err(Error::IllConditioned("rank filtration does not match eigenvalue multiplicities".into())),
    }
}

fn fmt_c(z: C64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn mean(eig: &[C64], idx: &[usize]) -> C64 {
    idx.iter().map(|&i| eig[i]).sum::<C64>() / idx.len() as f64
}

fn cluster(eig: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = eig.len();
    let mut label: Vec<usize> = (0..n).collect();
    let find = |label: &Vec<usize>, mut i: usize| {
        while label[i] != i {
            i = label[i];
        }
        i
    };
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() <= tol {
                let (a, b) = (find(&label, i), find(&label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&label, i);
        match roots.iter().position(|&x| x == r) {
            Some(p) => groups[p].push(i),
            None => {
                roots.push(r);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Allowed eigenvalue spread (relative) for a cluster whose largest block is `b`.
fn allowance(b: usize) -> f64 {
    if b <= 1 {
        1e-7
    } else {
        4.0 * 1e-9_f64.powf(1.0 / b as f64)
    }
}

/// `(center, block sizes)` per cluster, or `None` if some cluster's kernel
/// dimensions disagree with its multiplicity.
fn analyze_clusters(
    mat: &Matrix6<f64>,
    eig: &[C64],
    clusters: &[Vec<usize>],
    norm: f64,
    opts: &SegreOptions,
    check_spread: bool,
) -> Option<Vec<(C64, Vec<usize>)>> {
    let mut out = Vec::new();
    for c in clusters {
        let mu = mean(eig, c);
        let m = c.len();
        let dims = kernel_dims(mat, mu, m, opts.rank_tol);
        if dims[m - 1] != m {
            return None;
        }
        let mut sizes = Vec::new();
        // blocks of size ≥ k: d_k − d_{k−1}
        let mut ge = vec![0usize; m + 2];
        for k in 1..=m {
            ge[k] = dims[k - 1] - if k >= 2 { dims[k - 2] } else { 0 };
        }
        for k in 1..=m {
            let exactly = ge[k].checked_sub(ge[k + 1])?;
            sizes.extend(std::iter::repeat_n(k, exactly));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        if check_spread {
            let spread = c.iter().map(|&i| (eig[i] - mu).norm()).fold(0.0, f64::max);
            if spread > allowance(sizes[0]) * norm {
                return None;
            }
        }
        out.push((mu, sizes));
    }
    Some(out)
}

/// `d_k = dim ker (M − μ)^k` for `k = 1..=m`.
fn kernel_dims(mat: &Matrix6<f64>, mu: C64, m: usize, rank_tol: f64) -> Vec<usize> {
    let shifted = DMatrix::from_fn(6, 6, |r, c| C64::new(mat[(r, c)], 0.0) - if r == c { mu } else { C64::new(0.0, 0.0) });
    let mut power = DMatrix::<C64>::identity(6, 6);
    let mut dims = Vec::with_capacity(m);
    for _ in 0..m {
        power = &power * &shifted;
        let sv = power.clone().singular_values();
        let smax = sv.max();
        let nullity = if smax == 0.0 { 6 } else { sv.iter().filter(|&&s| s < rank_tol * smax).count() };
        dims.push(nullity);
    }
    dims
}

fn assemble(blocks: Vec<(C64, Vec<usize>)>, tol: f64) -> SegreType {
    let mut real_blocks = Vec::new();
    let mut complex_blocks = Vec::new();
    for (mu, sizes) in blocks {
        if mu.im.abs() <= 0.5 * tol {
            real_blocks.push((mu.re, sizes));
        } else if mu.im > 0.0 {
            complex_blocks.push((mu, sizes));
        }
    }
    real_blocks.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.total_cmp(&b.0)));
    complex_blocks.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.re.total_cmp(&b.0.re)).then(a.0.im.total_cmp(&b.0.im)));
    SegreType { real_blocks, complex_blocks }
}

/// Metaclass labels; `VIIIToXXIII` collects every type with a real
/// eigenvalue carrying a Jordan block of size at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metaclass {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    #[serde(rename = "VIII-XXIII")]
    VIIIToXXIII,
}

impl Metaclass {
    pub const NORMAL_FORMS: [Metaclass; 7] = [Self::I, Self::II, Self::III, Self::IV, Self::V, Self::VI, Self::VII];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::V => "V",
            Self::VI => "VI",
            Self::VII => "VII",
            Self::VIIIToXXIII => "VIII-XXIII",
        }
    }
}

impl fmt::Display for Metaclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Metaclass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "I" => Self::I,
            "II" => Self::II,
            "III" => Self::III,
            "IV" => Self::IV,
            "V" => Self::V,
            "VI" => Self::VI,
            "VII" => Self::VII,
            "VIII-XXIII" | "VIII_to_XXIII" => Self::VIIIToXXIII,
            _ => return Err(Error::InvalidParams(format!("unknown metaclass {s:?}"))),
        })
    }
}

/// Block sizes `(real, complex)` of each normal-form class.
type ReferenceType = (Metaclass, Vec<usize>, Vec<usize>);

fn reference_types() -> &'static [ReferenceType] {
    static TYPES: OnceLock<Vec<ReferenceType>> = OnceLock::new();
    TYPES.get_or_init(|| {
        let mut out = vec![
            (Metaclass::I, vec![], vec![1, 1, 1]),
            (Metaclass::II, vec![], vec![2, 1]),
            (Metaclass::IV, vec![1, 1], vec![1, 1]),
        ];
        for class in [Metaclass::III, Metaclass::V, Metaclass::VI, Metaclass::VII] {
            let params = crate::metaclass::MetaclassParams::reference(class);
            let kappa = crate::metaclass::construct_metaclass(&params).expect("reference parameters are valid");
            let t = segre_type(kappa.matrix()).expect("reference normal forms are well conditioned");
            out.push((class, t.real_sizes(), t.complex_sizes()));
        }
        out
    })
}

/// Metaclass from block sizes alone.
pub fn metaclass_of_type(t: &SegreType) -> Option<Metaclass> {
    let real = t.real_sizes();
    if real.iter().any(|&k| k >= 2) {
        return Some(Metaclass::VIIIToXXIII);
    }
    let complex = t.complex_sizes();
    reference_types().iter().find(|(_, r, c)| *r == real && *c == complex).map(|(m, _, _)| *m)
}

pub fn metaclass_of(kappa: &MediumTensor) -> Result<Metaclass> {
    metaclass_of_with(kappa, &SegreOptions::default())
}

pub fn metaclass_of_with(kappa: &MediumTensor, opts: &SegreOptions) -> Result<Metaclass> {
    if !kappa.is_skewon_free(SKEWON_TOL) {
        return Err(Error::NotSkewonFree);
    }
    let sv = kappa.matrix().singular_values();
    if sv.max() == 0.0 || sv.min() < SINGULAR_TOL * sv.max() {
        return Err(Error::SingularMedium);
    }
    let t = segre_type_with(kappa.matrix(), opts)?;
    metaclass_of_type(&t).ok_or_else(|| Error::IllConditioned(format!("Segre type {t} matches no metaclass")))
}
