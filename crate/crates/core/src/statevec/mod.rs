//! Dense statevector backend for arbitrary pure states.
//!
//! Basis convention: the amplitude of `|c₁…c_n⟩` sits at index
//! `Σ c_i·2^{n−i}`, i.e. qubit 1 is the most significant bit. Partial traces
//! work by splitting index bits between the kept subset and its complement, so
//! the full `2^n × 2^n` density matrix is never formed.

mod amplitudes;
pub mod pauli;

use num_complex::Complex64;

pub use amplitudes::{parse_amplitudes, serialize_amplitudes};
pub use pauli::{PauliLetter, PauliTerm};

use crate::error::{invalid, Error, Result};
use crate::graphs::Graph;
use crate::marginal::{MarginalBackend, SubsetVerdict};
use crate::subsets::{colex, from_vertices, full_mask};

/// Largest qubit count the dense backend will allocate.
pub const MAX_QUBITS: usize = 26;
/// Default max-norm tolerance for deciding maximal mixedness.
pub const DEFAULT_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps `2^n` amplitudes; the Euclidean norm must be 1 within 1e−12.
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(n)?;
        if amplitudes.len() != 1usize << n {
            return Err(invalid(format!(
                "{} amplitudes given for {n} qubits (expected {})",
                amplitudes.len(),
                1usize << n
            )));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("state norm² is {norm2}, expected 1")));
        }
        Ok(Self { n, amplitudes })
    }

    /// Like [`PureState::new`] but rescales any nonzero vector to unit norm.
    pub fn normalized(n: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(n, amplitudes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of a basis state given as bits `c₁…c_n`.
    pub fn amplitude_of(&self, bits: &[u8]) -> Complex64 {
        assert_eq!(bits.len(), self.n);
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        self.amplitudes[idx]
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("a state needs at least one qubit"));
    }
    if n > MAX_QUBITS {
        return Err(Error::Resource(format!(
            "{n} qubits exceed the dense backend limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// `|G⟩ = 2^{−n/2} Σ_c (−1)^{Σ_{edges uv} c_u c_v} |c⟩`.
pub fn graph_state_vector(g: &Graph) -> Result<PureState> {
    let n = g.n();
    check_qubits(n)?;
    // Edge masks in index-bit coordinates (qubit i ↔ bit n − i).
    let edge_masks: Vec<usize> = g
        .edges()
        .into_iter()
        .map(|(u, v)| (1usize << (n - u)) | (1usize << (n - v)))
        .collect();
    let amp = (0.5f64).powf(n as f64 / 2.0);
    let amplitudes = (0..1usize << n)
        .map(|c| {
            let odd = edge_masks.iter().filter(|&&m| c & m == m).count() % 2 == 1;
            Complex64::new(if odd { -amp } else { amp }, 0.0)
        })
        .collect();
    PureState::new(n, amplitudes)
}

/// Reduced state on `k` qubits, row-major `2^k × 2^k`. Within the subset the
/// lowest-numbered qubit is the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    k: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        1 << self.k
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    /// Largest entrywise deviation from `I / 2^k`.
    pub fn distance_from_maximally_mixed(&self) -> f64 {
        let d = self.dim();
        let diag = 1.0 / d as f64;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { diag } else { 0.0 };
                worst = worst.max((self.get(i, j) - target).norm());
            }
        }
        worst
    }

    /// `ρ²` as a new matrix.
    pub fn square(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for l in 0..d {
                let a = self.get(i, l);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * self.get(l, j);
                }
            }
        }
        out
    }
}

/// Scatter table: entry `a` places the bits of `a` onto the index bits of
/// `qubits` (ascending qubit numbers, first qubit ↔ most significant bit of `a`).
fn scatter_table(n: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|a| {
            qubits
                .iter()
                .enumerate()
                .filter(|&(j, _)| (a >> (k - 1 - j)) & 1 == 1)
                .fold(0usize, |acc, (_, &q)| acc | (1 << (n - q)))
        })
        .collect()
}

fn reduced_density_mask(psi: &PureState, mask: u64) -> DensityMatrix {
    let n = psi.n;
    let kept: Vec<usize> = (1..=n).filter(|&q| mask >> (q - 1) & 1 == 1).collect();
    let traced: Vec<usize> = (1..=n).filter(|&q| mask >> (q - 1) & 1 == 0).collect();
    let k = kept.len();
    let d = 1usize << k;
    let kidx = scatter_table(n, &kept);
    let eidx = scatter_table(n, &traced);
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    let mut column = vec![Complex64::new(0.0, 0.0); d];
    for &e in &eidx {
        for (a, slot) in column.iter_mut().enumerate() {
            *slot = psi.amplitudes[kidx[a] | e];
        }
        for a in 0..d {
            let x = column[a];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &mut entries[a * d..(a + 1) * d];
            for (slot, y) in row.iter_mut().zip(&column) {
                *slot += x * y.conj();
            }
        }
    }
    DensityMatrix { k, entries }
}

/// Partial trace over the complement of `subset` (1-based qubits, any order).
pub fn reduced_density(psi: &PureState, subset: &[usize]) -> Result<DensityMatrix> {
    let mask = from_vertices(subset, psi.n)?;
    if mask == 0 {
        return Err(invalid("subset must be nonempty"));
    }
    Ok(reduced_density_mask(psi, mask))
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.entries.iter().map(|z| z.norm_sqr()).sum()
}

/// Whether `ρ_K` is within `tol` (max-norm) of `I / 2^{|K|}`.
pub fn is_maximally_mixed_sv(psi: &PureState, subset: &[usize], tol: f64) -> Result<bool> {
    Ok(reduced_density(psi, subset)?.distance_from_maximally_mixed() <= tol)
}

fn letters_to_masks(n: usize, letters: &[PauliLetter]) -> (usize, usize, u32) {
    let (mut x, mut z, mut ny) = (0usize, 0usize, 0u32);
    for (i, l) in letters.iter().enumerate() {
        let bit = 1usize << (n - 1 - i);
        match l {
            PauliLetter::I => {}
            PauliLetter::X => x |= bit,
            PauliLetter::Z => z |= bit,
            PauliLetter::Y => {
                x |= bit;
                z |= bit;
                ny += 1;
            }
        }
    }
    (x, z, ny)
}

/// `⟨ψ|σ_x σ_z|ψ⟩·i^{ny}` without forming ρ.
fn expectation_masks(psi: &PureState, x: usize, z: usize, ny: u32) -> f64 {
    let phase = Complex64::i().powu(ny % 4);
    let sum: Complex64 = psi
        .amplitudes
        .iter()
        .enumerate()
        .map(|(c, &a)| {
            let sign = if (c & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            psi.amplitudes[c ^ x].conj() * a * sign
        })
        .sum();
    (sum * phase).re
}

/// Bloch coefficient `r_α = tr(σ_α ρ) = ⟨ψ|σ_α|ψ⟩`.
pub fn bloch_coefficient(psi: &PureState, letters: &[PauliLetter]) -> Result<f64> {
    if letters.len() != psi.n {
        return Err(invalid(format!(
            "Pauli string has {} letters for {} qubits",
            letters.len(),
            psi.n
        )));
    }
    let (x, z, ny) = letters_to_masks(psi.n, letters);
    Ok(expectation_masks(psi, x, z, ny))
}

/// Largest n for which [`weight_sector_norm`] enumerates all Pauli strings.
pub const MAX_SECTOR_QUBITS: usize = 12;

/// `Σ_{wt(α) = j} r_α²`, the squared coefficient mass of weight-j Pauli strings.
pub fn weight_sector_norm(psi: &PureState, j: usize) -> Result<f64> {
    let n = psi.n;
    if j == 0 || j > n {
        return Err(invalid(format!("weight {j} outside 1..={n}")));
    }
    if n > MAX_SECTOR_QUBITS {
        return Err(Error::Resource(format!(
            "Pauli enumeration limited to {MAX_SECTOR_QUBITS} qubits, got {n}"
        )));
    }
    let combos = 3usize.pow(j as u32);
    let mut total = 0.0;
    let mut letters = vec![PauliLetter::I; n];
    for support in colex(n, j) {
        let qubits: Vec<usize> = (0..n).filter(|&i| support >> i & 1 == 1).collect();
        for mut code in 0..combos {
            for &q in &qubits {
                letters[q] = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z][code % 3];
                code /= 3;
            }
            let (x, z, ny) = letters_to_masks(n, &letters);
            let r = expectation_masks(psi, x, z, ny);
            total += r * r;
        }
        for &q in &qubits {
            letters[q] = PauliLetter::I;
        }
    }
    Ok(total)
}

/// Dense backend adapter for the marginal driver.
#[derive(Debug, Clone)]
pub struct SvBackend<'a> {
    pub psi: &'a PureState,
    pub tol: f64,
}

impl MarginalBackend for SvBackend<'_> {
    fn n(&self) -> usize {
        self.psi.n
    }

    fn label(&self) -> &'static str {
        "statevector"
    }

    fn inspect(&self, mask: u64) -> SubsetVerdict {
        let rho = reduced_density_mask(self.psi, mask & full_mask(self.psi.n));
        SubsetVerdict {
            maximally_mixed: rho.distance_from_maximally_mixed() <= self.tol,
            cut_rank: None,
            purity_exact: None,
            purity: purity(&rho),
        }
    }
}

/// `|φ⟩ = ½(|0000⟩ + |0111⟩ + |1001⟩ + |1110⟩)`.
pub fn phi4() -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for idx in [0b0000, 0b0111, 0b1001, 0b1110] {
        amps[idx] = Complex64::new(0.5, 0.0);
    }
    PureState::new(4, amps).expect("unit norm")
}

/// `|M₄⟩ = (|0011⟩ + |1100⟩ + ω(|1010⟩ + |0101⟩) + ω²(|1001⟩ + |0110⟩)) / √6`, `ω = e^{2πi/3}`.
pub fn m4() -> PureState {
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let scale = 1.0 / 6f64.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for (idx, phase) in [
        (0b0011, Complex64::new(1.0, 0.0)),
        (0b1100, Complex64::new(1.0, 0.0)),
        (0b1010, omega),
        (0b0101, omega),
        (0b1001, omega * omega),
        (0b0110, omega * omega),
    ] {
        amps[idx] = phase * scale;
    }
    PureState::new(4, amps).expect("unit norm")
}
