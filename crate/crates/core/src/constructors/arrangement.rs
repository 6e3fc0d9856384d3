use super::{assert_paraunitary, check_weight};
use crate::error::{Error, Result};
use crate::idempotents::{GroupTable, IdempotentSet};
use crate::laurent::LaurentPoly;
use crate::polymatrix::PolyMatrix;

/// A k×k Latin square of member indices with a unit monomial per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementPlan {
    grid: Vec<Vec<usize>>,
    cells: Vec<Vec<LaurentPoly>>,
}

impl ArrangementPlan {
    pub fn new(grid: Vec<Vec<usize>>, cells: Vec<Vec<LaurentPoly>>) -> Result<ArrangementPlan> {
        let k = grid.len();
        if k == 0 {
            return Err(Error::NotLatinSquare("empty grid".into()));
        }
        for (i, row) in grid.iter().enumerate() {
            if row.len() != k {
                return Err(Error::NotLatinSquare(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; k];
            for &x in row {
                if x >= k || seen[x] {
                    return Err(Error::NotLatinSquare(format!("row {i} is not a permutation of 0..{k}")));
                }
                seen[x] = true;
            }
        }
        for j in 0..k {
            let mut seen = vec![false; k];
            for row in &grid {
                if seen[row[j]] {
                    return Err(Error::NotLatinSquare(format!("column {j} repeats {}", row[j])));
                }
                seen[row[j]] = true;
            }
        }
        if cells.len() != k || cells.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch(format!("cell grid does not match a {k}x{k} plan")));
        }
        for (i, row) in cells.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                check_weight(i * k + j, w)?;
            }
        }
        Ok(ArrangementPlan { grid, cells })
    }

    /// Cell (i, j) holds member (j - i) mod k.
    pub fn circulant_grid(k: usize) -> Vec<Vec<usize>> {
        (0..k).map(|i| (0..k).map(|j| (j + k - i) % k).collect()).collect()
    }

    /// Cell (i, j) holds the member indexed by g_i^-1 g_j.
    pub fn group_grid(table: &GroupTable) -> Vec<Vec<usize>> {
        let k = table.order();
        (0..k).map(|i| (0..k).map(|j| table.g_matrix_index(i, j)).collect()).collect()
    }

    pub fn circulant(cells: Vec<Vec<LaurentPoly>>) -> Result<ArrangementPlan> {
        Self::new(Self::circulant_grid(cells.len()), cells)
    }

    pub fn from_group(table: &GroupTable, cells: Vec<Vec<LaurentPoly>>) -> Result<ArrangementPlan> {
        Self::new(Self::group_grid(table), cells)
    }

    pub fn size(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[Vec<usize>] {
        &self.grid
    }

    pub fn cells(&self) -> &[Vec<LaurentPoly>] {
        &self.cells
    }
}

/// The block matrix whose (i, j) block is `cell(i, j) * E_grid(i, j)`.
pub fn block_arrangement(set: &IdempotentSet, plan: &ArrangementPlan) -> Result<PolyMatrix> {
    if set.len() != plan.size() {
        return Err(Error::DimensionMismatch(format!(
            "a {}x{} plan for {} members",
            plan.size(),
            plan.size(),
            set.len()
        )));
    }
    let blocks = plan
        .grid
        .iter()
        .zip(&plan.cells)
        .map(|(idx, cells)| {
            idx.iter()
                .zip(cells)
                .map(|(&m, w)| set.member(m).scale_poly(w))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    assert_paraunitary(PolyMatrix::from_blocks(&blocks)?, "block_arrangement")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotents::{diagonal_set, from_orthonormal_basis, group_set};
    use crate::laurent::parse_poly;
    use crate::scalars::Ring;

    fn cells(ring: &Ring, grid: &[&[&str]]) -> Vec<Vec<LaurentPoly>> {
        grid.iter()
            .map(|r| r.iter().map(|t| parse_poly(t, ring, None).unwrap()).collect())
            .collect()
    }

    #[test]
    fn circulant_grid_shape() {
        assert_eq!(
            ArrangementPlan::circulant_grid(4),
            vec![vec![0, 1, 2, 3], vec![3, 0, 1, 2], vec![2, 3, 0, 1], vec![1, 2, 3, 0]]
        );
    }

    #[test]
    fn klein_grid_is_xor() {
        let t = GroupTable::elementary_abelian_2(2).unwrap();
        let g = ArrangementPlan::group_grid(&t);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g[i][j], i ^ j);
            }
        }
    }

    #[test]
    fn c2_opening_example() {
        let q = Ring::rational();
        let set = group_set(&GroupTable::cyclic(2).unwrap(), &q).unwrap();
        let plan = ArrangementPlan::circulant(cells(&q, &[&["x", "y"], &["z", "t"]])).unwrap();
        let w = block_arrangement(&set, &plan).unwrap();
        let expected = PolyMatrix::parse_rows(
            &q,
            &[
                &["x/2", "x/2", "y/2", "-y/2"],
                &["x/2", "x/2", "-y/2", "y/2"],
                &["z/2", "-z/2", "t/2", "t/2"],
                &["-z/2", "z/2", "t/2", "t/2"],
            ],
        )
        .unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn onb_nine_variables() {
        let q = Ring::rational();
        let basis = PolyMatrix::parse_rows(
            &q,
            &[&["2/3", "1/3", "2/3"], &["1/3", "2/3", "-2/3"], &["2/3", "-2/3", "-1/3"]],
        )
        .unwrap();
        let set = from_orthonormal_basis(&basis, None).unwrap();
        let plan =
            ArrangementPlan::circulant(cells(&q, &[&["x", "y", "z"], &["p", "q", "r"], &["s", "t", "v"]])).unwrap();
        assert_eq!(plan.grid()[1], vec![2, 0, 1]);
        let w = block_arrangement(&set, &plan).unwrap();
        assert_eq!(w.rows(), 9);
        assert_eq!(w.vars().len(), 9);
        let p3 = set.member(2);
        let pp3 = p3.scale_poly(&parse_poly("p", &q, None).unwrap()).unwrap();
        assert_eq!(w.block(1, 0, 3, 3), pp3);
    }

    #[test]
    fn scalar_permutation() {
        let q = Ring::rational();
        let set = diagonal_set(&q, 2).unwrap();
        let plan = ArrangementPlan::circulant(cells(&q, &[&["1", "1"], &["1", "1"]])).unwrap();
        let w = block_arrangement(&set, &plan).unwrap();
        assert!(w.is_scalar());
        assert!(w.is_paraunitary().unwrap().passed);
    }

    #[test]
    fn rejects_non_latin() {
        let q = Ring::rational();
        let c = cells(&q, &[&["1", "1"], &["1", "1"]]);
        assert!(matches!(
            ArrangementPlan::new(vec![vec![0, 1], vec![0, 1]], c.clone()),
            Err(Error::NotLatinSquare(_))
        ));
        assert!(matches!(
            ArrangementPlan::new(vec![vec![0, 0], vec![1, 1]], c.clone()),
            Err(Error::NotLatinSquare(_))
        ));
        assert!(matches!(
            ArrangementPlan::new(vec![vec![0, 2], vec![1, 0]], c),
            Err(Error::NotLatinSquare(_))
        ));
    }

    #[test]
    fn rejects_general_coefficients() {
        let q = Ring::rational();
        let c = cells(&q, &[&["x", "2*y"], &["1", "1"]]);
        assert_eq!(ArrangementPlan::circulant(c).unwrap_err(), Error::NotUnitModulus { index: 1 });
    }
}
