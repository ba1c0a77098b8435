//! Tensor products of single-qubit Pauli matrices with a complex coefficient.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    /// Single-qubit product `a·b = phase · c`.
    pub fn compose(self, other: Self) -> (Complex64, Self) {
        use PauliLetter::*;
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        match (self, other) {
            (I, p) | (p, I) => (one, p),
            (a, b) if a == b => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
            _ => unreachable!(),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Self::I),
            'X' => Some(Self::X),
            'Y' => Some(Self::Y),
            'Z' => Some(Self::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    pub letters: Vec<PauliLetter>,
}

impl PauliTerm {
    pub fn new(coefficient: Complex64, letters: Vec<PauliLetter>) -> Self {
        Self { coefficient, letters }
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != PauliLetter::I).count()
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        let clashes = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|&(&a, &b)| a != PauliLetter::I && b != PauliLetter::I && a != b)
            .count();
        Ok(clashes % 2 == 0)
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let mut coefficient = self.coefficient * other.coefficient;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (phase, c) = a.compose(b);
                coefficient *= phase;
                c
            })
            .collect();
        Ok(Self { coefficient, letters })
    }

    /// `{M, N} = MN + NM`; `None` when the terms anticommute and the sum vanishes.
    pub fn anticommutator(&self, other: &Self) -> Result<Option<Self>> {
        if !self.commutes_with(other)? {
            return Ok(None);
        }
        let mut p = self.product(other)?;
        p.coefficient *= 2.0;
        Ok(Some(p))
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.letters.len() != other.letters.len() {
            return Err(invalid(format!(
                "Pauli strings of length {} and {}",
                self.letters.len(),
                other.letters.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coefficient)?;
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Parses a bare letter string such as `XIZY` with coefficient 1.
impl FromStr for PauliTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| PauliLetter::from_char(c).ok_or_else(|| invalid(format!("bad Pauli letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(invalid("empty Pauli string"));
        }
        Ok(Self::new(Complex64::new(1.0, 0.0), letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const LETTERS: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    fn matrix(l: PauliLetter) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        match l {
            PauliLetter::I => [[one, o], [o, one]],
            PauliLetter::X => [[o, one], [one, o]],
            PauliLetter::Y => [[o, -i], [i, o]],
            PauliLetter::Z => [[one, o], [o, -one]],
        }
    }

    #[test]
    fn letter_table_matches_matrices() {
        for a in LETTERS {
            for b in LETTERS {
                let (ma, mb) = (matrix(a), matrix(b));
                let (phase, c) = a.compose(b);
                let mc = matrix(c);
                for r in 0..2 {
                    for col in 0..2 {
                        let prod = ma[r][0] * mb[0][col] + ma[r][1] * mb[1][col];
                        assert!((prod - phase * mc[r][col]).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_weight() {
        let t: PauliTerm = "xIzY".parse().unwrap();
        assert_eq!(t.weight(), 3);
        assert_eq!(t.to_string(), "(1+0i)XIZY");
        assert!("".parse::<PauliTerm>().is_err());
        assert!("XQ".parse::<PauliTerm>().is_err());
    }

    #[test]
    fn anticommuting_pair_vanishes() {
        let x: PauliTerm = "X".parse().unwrap();
        let z: PauliTerm = "Z".parse().unwrap();
        assert_eq!(x.anticommutator(&z).unwrap(), None);
        let xx: PauliTerm = "XX".parse().unwrap();
        let zz: PauliTerm = "ZZ".parse().unwrap();
        let ac = xx.anticommutator(&zz).unwrap().unwrap();
        // XZ ⊗ XZ = (−iY)(−iY) = −YY, doubled
        assert_eq!(ac.letters, vec![PauliLetter::Y, PauliLetter::Y]);
        assert!((ac.coefficient - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
        assert!(x.product(&xx).is_err());
    }

    fn random_term(n: usize, rng: &mut impl Rng) -> PauliTerm {
        let letters = (0..n).map(|_| LETTERS[rng.random_range(0..4)]).collect();
        PauliTerm::new(Complex64::new(rng.random_range(-2.0..2.0), 0.0), letters)
    }

    #[test]
    fn parity_rule_on_many_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9a1);
        let mut nonzero = 0;
        for _ in 0..100_000 {
            let n = rng.random_range(1..=8);
            let m = random_term(n, &mut rng);
            let k = random_term(n, &mut rng);
            if let Some(ac) = m.anticommutator(&k).unwrap() {
                nonzero += 1;
                assert_eq!(ac.weight() % 2, (m.weight() + k.weight()) % 2, "{m} {k}");
            }
        }
        assert!(nonzero > 10_000);
    }

    proptest! {
        #[test]
        fn parity_rule(letters in prop::collection::vec((0usize..4, 0usize..4), 1..20)) {
            let m = PauliTerm::new(Complex64::new(1.0, 0.0), letters.iter().map(|&(a, _)| LETTERS[a]).collect());
            let k = PauliTerm::new(Complex64::new(1.0, 0.0), letters.iter().map(|&(_, b)| LETTERS[b]).collect());
            if let Some(ac) = m.anticommutator(&k).unwrap() {
                prop_assert_eq!(ac.weight() % 2, (m.weight() + k.weight()) % 2);
                // the product of Hermitian commuting terms is Hermitian, so the coefficient stays real
                prop_assert!(ac.coefficient.im.abs() < 1e-12);
            }
        }
    }
}
