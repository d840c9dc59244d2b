use crate::error::{Error, Result};

/// A nonempty, strictly increasing set of qubit indices within an
/// `n_qubits` register.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QubitSubset {
    indices: Vec<usize>,
    n_qubits: usize,
}

impl QubitSubset {
    /// Builds a subset from indices in any order. Duplicates, out-of-range
    /// indices and empty lists are rejected.
    pub fn new(mut indices: Vec<usize>, n_qubits: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSubset("subset is empty".into()));
        }
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::RepeatedQubit(w[0]));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: last,
                    n_qubits,
                });
            }
        }
        Ok(Self { indices, n_qubits })
    }

    pub fn single(index: usize, n_qubits: usize) -> Result<Self> {
        Self::new(vec![index], n_qubits)
    }

    /// Every qubit of the register.
    pub fn all(n_qubits: usize) -> Result<Self> {
        Self::new((0..n_qubits).collect(), n_qubits)
    }

    pub fn range(range: std::ops::Range<usize>, n_qubits: usize) -> Result<Self> {
        Self::new(range.collect(), n_qubits)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn contains(&self, q: usize) -> bool {
        self.indices.binary_search(&q).is_ok()
    }

    /// True when the subset covers the whole register.
    pub fn is_full(&self) -> bool {
        self.indices.len() == self.n_qubits
    }

    /// The remaining qubits, or `None` when the subset is the full register.
    pub fn complement(&self) -> Option<QubitSubset> {
        let rest: Vec<usize> = (0..self.n_qubits).filter(|&q| !self.contains(q)).collect();
        if rest.is_empty() {
            None
        } else {
            Some(Self {
                indices: rest,
                n_qubits: self.n_qubits,
            })
        }
    }

    pub(crate) fn check_register(&self, n_qubits: usize) -> Result<()> {
        if self.n_qubits != n_qubits {
            return Err(Error::InvalidSubset(format!(
                "subset built for {} qubits used on a {}-qubit register",
                self.n_qubits, n_qubits
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for QubitSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_validates() {
        let s = QubitSubset::new(vec![2, 0], 3).unwrap();
        assert_eq!(s.indices(), &[0, 2]);
        assert_eq!(s.complement().unwrap().indices(), &[1]);
        assert_eq!(s.to_string(), "{0,2}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            QubitSubset::new(vec![], 3),
            Err(Error::InvalidSubset(_))
        ));
        assert_eq!(
            QubitSubset::new(vec![1, 1], 3),
            Err(Error::RepeatedQubit(1))
        );
        assert_eq!(
            QubitSubset::new(vec![3], 3),
            Err(Error::QubitOutOfRange {
                index: 3,
                n_qubits: 3
            })
        );
    }

    #[test]
    fn full_subset_has_no_complement() {
        let s = QubitSubset::all(4).unwrap();
        assert!(s.is_full());
        assert!(s.complement().is_none());
    }
}
