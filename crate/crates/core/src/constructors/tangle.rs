use std::fmt;
use std::str::FromStr;

use super::{assert_paraunitary, require_paraunitary};
use crate::error::{Error, Result};
use crate::polymatrix::PolyMatrix;

/// Which input plays the role of `A` in the block forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TangleOrder {
    AB,
    BA,
}

/// `Rows` is `[[A, B], [A, -B]]`, `Columns` is `[[A, A], [B, -B]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TangleForm {
    Rows,
    Columns,
}

/// Interchange of the two block rows or the two block columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockSwap {
    None,
    Rows,
    Columns,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TangleVariant {
    pub order: TangleOrder,
    pub form: TangleForm,
    pub swap: BlockSwap,
    pub transpose: bool,
}

impl Default for TangleVariant {
    fn default() -> Self {
        TangleVariant::BASE
    }
}

impl TangleVariant {
    /// `(1/sqrt 2) [[A, B], [A, -B]]`.
    pub const BASE: TangleVariant = TangleVariant {
        order: TangleOrder::AB,
        form: TangleForm::Rows,
        swap: BlockSwap::None,
        transpose: false,
    };

    /// All 24 variants.
    pub fn all() -> Vec<TangleVariant> {
        let mut out = Vec::with_capacity(24);
        for order in [TangleOrder::AB, TangleOrder::BA] {
            for form in [TangleForm::Rows, TangleForm::Columns] {
                for swap in [BlockSwap::None, BlockSwap::Rows, BlockSwap::Columns] {
                    for transpose in [false, true] {
                        out.push(TangleVariant {
                            order,
                            form,
                            swap,
                            transpose,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Names like `AB-rows-none` or `BA-columns-swap-rows-T`.
impl fmt::Display for TangleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = match self.order {
            TangleOrder::AB => "AB",
            TangleOrder::BA => "BA",
        };
        let form = match self.form {
            TangleForm::Rows => "rows",
            TangleForm::Columns => "columns",
        };
        let swap = match self.swap {
            BlockSwap::None => "none",
            BlockSwap::Rows => "swap-rows",
            BlockSwap::Columns => "swap-columns",
        };
        write!(f, "{order}-{form}-{swap}{}", if self.transpose { "-T" } else { "" })
    }
}

impl FromStr for TangleVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<TangleVariant> {
        TangleVariant::all()
            .into_iter()
            .find(|v| v.to_string() == s)
            .ok_or_else(|| Error::parse(format!("unknown tangle variant {s:?}")))
    }
}

/// A tangle of two paraunitary matrices of the same size.
pub fn tangle(a: &PolyMatrix, b: &PolyMatrix, variant: TangleVariant) -> Result<PolyMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::SizeMismatch(format!(
            "{}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if a.ring() != b.ring() {
        return Err(crate::scalars::incompatible(a.ring(), b.ring()));
    }
    let half_root = a.ring().sqrt2()?.inv()?;
    require_paraunitary(a)?;
    require_paraunitary(b)?;
    let (x, y) = match variant.order {
        TangleOrder::AB => (a, b),
        TangleOrder::BA => (b, a),
    };
    let mut grid = match variant.form {
        TangleForm::Rows => vec![vec![x.clone(), y.clone()], vec![x.clone(), y.neg()]],
        TangleForm::Columns => vec![vec![x.clone(), x.clone()], vec![y.clone(), y.neg()]],
    };
    match variant.swap {
        BlockSwap::None => {}
        BlockSwap::Rows => grid.swap(0, 1),
        BlockSwap::Columns => grid.iter_mut().for_each(|r| r.swap(0, 1)),
    }
    let mut w = PolyMatrix::from_blocks(&grid)?.scale(&half_root)?;
    if variant.transpose {
        w = w.transpose();
    }
    assert_paraunitary(w, "tangle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotents::{from_orthogonal_basis, IdempotentSet};
    use crate::scalars::Ring;
    use crate::{LaurentPoly, Rational};

    fn single(ring: &Ring, name: &str) -> PolyMatrix {
        PolyMatrix::new(ring, 1, 1, vec![LaurentPoly::var(ring, name).unwrap()]).unwrap()
    }

    #[test]
    fn variants_are_distinct_and_named() {
        let all = TangleVariant::all();
        assert_eq!(all.len(), 24);
        for v in &all {
            assert_eq!(v.to_string().parse::<TangleVariant>().unwrap(), *v);
        }
        let names: std::collections::BTreeSet<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(names.len(), 24);
        assert_eq!(TangleVariant::BASE.to_string(), "AB-rows-none");
    }

    #[test]
    fn scalar_tangle() {
        let ring = Ring::cyclotomic(8).unwrap();
        let w = tangle(&single(&ring, "x"), &single(&ring, "y"), TangleVariant::BASE).unwrap();
        let r = ring.sqrt2().unwrap().inv().unwrap();
        let x = LaurentPoly::var(&ring, "x").unwrap().scale(&r).unwrap();
        let y = LaurentPoly::var(&ring, "y").unwrap().scale(&r).unwrap();
        let expected = PolyMatrix::new(&ring, 2, 2, vec![x.clone(), y.clone(), x, y.neg()]).unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn iterated_tangle() {
        let ring = Ring::cyclotomic(8).unwrap();
        let w = tangle(&single(&ring, "x"), &single(&ring, "y"), TangleVariant::BASE).unwrap();
        let q = tangle(&single(&ring, "z"), &single(&ring, "t"), TangleVariant::BASE).unwrap();
        let t = tangle(&w, &q, TangleVariant::BASE).unwrap();
        let expected = PolyMatrix::parse_rows(
            &ring,
            &[
                &["x/2", "y/2", "z/2", "t/2"],
                &["x/2", "-y/2", "z/2", "-t/2"],
                &["x/2", "y/2", "-z/2", "-t/2"],
                &["x/2", "-y/2", "-z/2", "t/2"],
            ],
        )
        .unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn variant_layouts() {
        let ring = Ring::prime_field(7).unwrap();
        let a = single(&ring, "x");
        let b = single(&ring, "y");
        let v = TangleVariant {
            order: TangleOrder::AB,
            form: TangleForm::Columns,
            swap: BlockSwap::Columns,
            transpose: false,
        };
        // 1/sqrt 2 = 1/3 = 5 in F_7
        let w = tangle(&a, &b, v).unwrap();
        let expected = PolyMatrix::parse_rows(&ring, &[&["5*x", "5*x"], &["-5*y", "5*y"]]).unwrap();
        assert_eq!(w, expected);
        let t = tangle(&a, &b, TangleVariant { transpose: true, ..v }).unwrap();
        assert_eq!(t, expected.transpose());
        let ba = tangle(&a, &b, TangleVariant { order: TangleOrder::BA, ..TangleVariant::BASE }).unwrap();
        assert_eq!(ba, PolyMatrix::parse_rows(&ring, &[&["5*y", "5*x"], &["5*y", "-5*x"]]).unwrap());
    }

    #[test]
    fn needs_sqrt2() {
        let q = Ring::rational();
        assert!(matches!(
            tangle(&single(&q, "x"), &single(&q, "y"), TangleVariant::BASE),
            Err(Error::NoSquareRoot { .. })
        ));
    }

    #[test]
    fn rejects_mismatch() {
        let ring = Ring::cyclotomic(8).unwrap();
        let a = single(&ring, "x");
        let b = PolyMatrix::identity(&ring, &crate::VarSet::empty(), 2);
        assert!(matches!(tangle(&a, &b, TangleVariant::BASE), Err(Error::SizeMismatch(_))));
        let two = a.scale(&ring.from_int(2)).unwrap();
        assert_eq!(tangle(&two, &a, TangleVariant::BASE).unwrap_err(), Error::NotParaunitary);
    }

    #[test]
    fn complex_sets_tangle() {
        let ring = Ring::cyclotomic(8).unwrap();
        let e = from_orthogonal_basis(&PolyMatrix::parse_rows(&ring, &[&["1", "1"], &["1", "-1"]]).unwrap(), None)
            .unwrap();
        let q = from_orthogonal_basis(&PolyMatrix::parse_rows(&ring, &[&["2", "1"], &["1", "-2"]]).unwrap(), None)
            .unwrap();
        let sum = |s: &IdempotentSet, u: &str, v: &str| {
            let w = super::super::MonomialAssignment::parse(&ring, &[u, v]).unwrap();
            super::super::monomial_sum(s, &w).unwrap()
        };
        let w = tangle(&sum(&e, "x", "y"), &sum(&q, "z", "t"), TangleVariant::BASE).unwrap();
        assert_eq!(w.rows(), 4);
        assert_eq!(w.vars().len(), 4);
        assert_eq!(q.member(0).get(0, 0).constant_value().unwrap().as_rational(), Some(Rational::new(4, 5)));
    }
}
