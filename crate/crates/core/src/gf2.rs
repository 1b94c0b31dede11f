//! Sparse Z/2 column arithmetic.
//!
//! Columns are strictly increasing row-index vectors; addition is symmetric
//! difference. [`ColumnSpace`] maintains a reduced basis keyed by pivot row
//! (the largest row index of a column) and answers rank and membership
//! queries by elimination.

/// Symmetric difference of two sorted index sets (Z/2 addition).
pub fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Incrementally reduced column space over Z/2.
#[derive(Debug, Default, Clone)]
pub struct ColumnSpace {
    // pivot row -> reduced column having that pivot
    pivots: std::collections::HashMap<usize, Vec<usize>>,
}

impl ColumnSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Eliminate `col` against the stored basis; the residual is zero iff
    /// `col` lies in the span.
    pub fn reduce(&self, mut col: Vec<usize>) -> Vec<usize> {
        while let Some(&pivot) = col.last() {
            match self.pivots.get(&pivot) {
                Some(basis_col) => col = sym_diff(&col, basis_col),
                None => break,
            }
        }
        col
    }

    /// Returns true iff `col` is spanned by the columns inserted so far.
    pub fn contains(&self, col: &[usize]) -> bool {
        self.reduce(col.to_vec()).is_empty()
    }

    /// Reduce and store `col`; returns true iff it was independent
    /// (i.e. the rank grew).
    pub fn insert(&mut self, col: Vec<usize>) -> bool {
        let reduced = self.reduce(col);
        match reduced.last() {
            Some(&pivot) => {
                self.pivots.insert(pivot, reduced);
                true
            }
            None => false,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_diff_cancels_common_entries() {
        assert_eq!(sym_diff(&[1, 2], &[2, 3]), vec![1, 3]);
        assert_eq!(sym_diff(&[1, 2], &[1, 2]), Vec::<usize>::new());
        assert_eq!(sym_diff(&[], &[5]), vec![5]);
    }

    #[test]
    fn rank_of_dependent_columns() {
        let mut space = ColumnSpace::new();
        assert!(space.insert(vec![0, 1]));
        assert!(space.insert(vec![1, 2]));
        // sum of the first two
        assert!(!space.insert(vec![0, 2]));
        assert_eq!(space.rank(), 2);
        assert!(space.contains(&[0, 2]));
        assert!(!space.contains(&[0, 3]));
    }
}
