//! Boundary matrix reduction over `F_2` with the twist (clearing) optimisation.
//!
//! Columns are indexed by filtration position; each column lists the positions
//! of its boundary in increasing order. Both engines feed this kernel.

pub type Column = Vec<usize>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reduction {
    /// `(birth position, death position)`.
    pub pairs: Vec<(usize, usize)>,
    /// Positions of unpaired (essential) cells.
    pub essential: Vec<usize>,
}

/// Symmetric difference of two sorted columns.
fn add_into(target: &mut Column, other: &[usize], scratch: &mut Column) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&other[j..]);
    std::mem::swap(target, scratch);
}

pub fn reduce(columns: &[Column], dims: &[u8]) -> Reduction {
    let n = columns.len();
    assert_eq!(dims.len(), n);
    let max_dim = dims.iter().copied().max().unwrap_or(0);
    let mut reduced: Vec<Column> = vec![Vec::new(); n];
    // pivot row -> column owning it
    let mut owner = vec![usize::MAX; n];
    let mut cleared = vec![false; n];
    let mut paired = vec![false; n];
    let mut pairs = Vec::new();
    let mut scratch = Vec::new();
    for d in (1..=max_dim).rev() {
        for j in 0..n {
            if dims[j] != d || cleared[j] {
                continue;
            }
            let mut col = columns[j].clone();
            while let Some(&low) = col.last() {
                let o = owner[low];
                if o == usize::MAX {
                    break;
                }
                add_into(&mut col, &reduced[o], &mut scratch);
            }
            if let Some(&low) = col.last() {
                owner[low] = j;
                cleared[low] = true;
                paired[low] = true;
                paired[j] = true;
                pairs.push((low, j));
            }
            reduced[j] = col;
        }
    }
    pairs.sort_unstable();
    let essential = (0..n).filter(|&j| !paired[j]).collect();
    Reduction { pairs, essential }
}
