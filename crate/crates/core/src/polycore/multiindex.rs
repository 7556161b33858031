use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Multi-index `(β_1, …, β_n)` of non-negative integers.
///
/// Ordering is graded lexicographic: total degree first, ties broken
/// lexicographically with the first variable most significant. The
/// greatest index present in a polynomial is its leading monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        assert!(!entries.is_empty(), "multi-index needs at least one entry");
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// All entries equal to one: the order of holomorphic functions.
    pub fn ones(n: usize) -> Self {
        MultiIndex(vec![1; n])
    }

    /// Unit index `e_j` (0-based `j`).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn with(&self, j: usize, value: u32) -> Self {
        let mut v = self.0.clone();
        v[j] = value;
        MultiIndex(v)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise `self_j < other_j` for all `j`.
    pub fn strictly_below(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a < b)
    }

    pub fn join(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// All indices `β` with `β_j < bound_j` for every `j`, in graded-lex order.
    pub fn box_below(bound: &MultiIndex) -> Vec<MultiIndex> {
        let n = bound.dim();
        if bound.0.contains(&0) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            out.push(MultiIndex(cur.clone()));
            let mut k = n;
            loop {
                if k == 0 {
                    out.sort();
                    return out;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < bound.0[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// `Π z_j^{β_j}` for complex arguments.
    pub fn monomial(&self, z: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(1.0, 0.0);
        for (zj, &p) in z.iter().zip(&self.0) {
            for _ in 0..p {
                acc *= zj;
            }
        }
        acc
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex::new(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
