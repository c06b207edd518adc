//! Built-in example objects.
//!
//! Element indices follow the names: in `E = {1, e, 0}` the identity is `0`,
//! `e` is `1` and the zero is `2`.

use crate::monoid::FiniteCommMonoid;
use crate::scheme::GluingData;

fn build(name: &str, rows: &[Vec<usize>], names: &[&str]) -> FiniteCommMonoid {
    FiniteCommMonoid::new(name, rows, 0).and_then(|m| m.with_names(names.iter().copied())).expect("corpus tables are valid")
}

/// Multiplication table of a monoid generated by one element `t` with
/// `t^k = t^(k + period)` once `k >= start`; indices are powers.
fn cyclic(name: &str, start: usize, period: usize, names: &[&str]) -> FiniteCommMonoid {
    let n = start + period;
    let reduce = |e: usize| if e < n { e } else { start + (e - start) % period };
    let rows: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|y| reduce(x + y)).collect()).collect();
    build(name, &rows, names)
}

pub fn t() -> FiniteCommMonoid {
    FiniteCommMonoid::trivial()
}

/// `{1, 0}` with `0` absorbing.
pub fn b() -> FiniteCommMonoid {
    build("B", &[vec![0, 1], vec![1, 1]], &["1", "0"])
}

/// `{1, e, 0}` with `e^2 = e`.
pub fn e() -> FiniteCommMonoid {
    build("E", &[vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 2]], &["1", "e", "0"])
}

/// `{1, t, t^2, 0}` with `t^3 = 0`.
pub fn f3() -> FiniteCommMonoid {
    cyclic("F3", 3, 1, &["1", "t", "t2", "0"])
}

/// `{1, t, 0}` with `t^2 = 0`.
pub fn n2() -> FiniteCommMonoid {
    cyclic("N2", 2, 1, &["1", "t", "0"])
}

pub fn c2() -> FiniteCommMonoid {
    cyclic("C2", 0, 2, &["1", "g"])
}

pub fn c3() -> FiniteCommMonoid {
    cyclic("C3", 0, 3, &["1", "g", "g2"])
}

/// `{1, t, t^2}` with `t^3 = t`; `{t, t^2}` is a group with identity `t^2`.
pub fn z3() -> FiniteCommMonoid {
    cyclic("Z3", 1, 2, &["1", "t", "t2"])
}

pub fn bxb() -> FiniteCommMonoid {
    b().product(&b()).renamed("BxB")
}

pub fn c2xb() -> FiniteCommMonoid {
    c2().product(&b()).renamed("C2xB")
}

pub fn exb() -> FiniteCommMonoid {
    e().product(&b()).renamed("ExB")
}

pub fn c2xe() -> FiniteCommMonoid {
    c2().product(&e()).renamed("C2xE")
}

/// Every built-in monoid, smallest first.
pub fn monoids() -> Vec<FiniteCommMonoid> {
    vec![t(), b(), c2(), c3(), e(), n2(), z3(), f3(), bxb(), c2xb(), exb(), c2xe()]
}

pub fn monoid_by_name(name: &str) -> Option<FiniteCommMonoid> {
    monoids().into_iter().find(|m| m.name() == name)
}

/// Two copies of `Spec(E)` glued along `D(e)`, where `E_e ≅ B`.
pub fn x2() -> GluingData {
    GluingData::new("X2", vec![e(), e()]).glue(0, 1, 1, 1, vec![0, 1])
}

/// Three copies of `Spec(E)` glued pairwise along `D(e)`.
pub fn x3() -> GluingData {
    GluingData::new("X3", vec![e(), e(), e()]).glue(0, 1, 1, 1, vec![0, 1]).glue(0, 2, 1, 1, vec![0, 1]).glue(1, 2, 1, 1, vec![0, 1])
}

/// Two copies of `Spec(F3)` sharing only the generic point: `t` is
/// nilpotent, so `(F3)_t` is trivial.
pub fn y2() -> GluingData {
    GluingData::new("Y2", vec![f3(), f3()]).glue(0, 1, 1, 1, vec![0])
}

/// Two copies of `Spec(C3)` glued by the automorphism `g ↦ g²`.
pub fn w() -> GluingData {
    GluingData::new("W", vec![c3(), c3()]).glue(0, 1, 1, 1, vec![0, 2, 1])
}

pub fn t_plus_t() -> GluingData {
    GluingData::new("T+T", vec![t(), t()])
}

pub fn b_plus_e() -> GluingData {
    GluingData::new("B+E", vec![b(), e()])
}

/// Built-in schemes: affine charts of the small monoids, then the glued ones.
pub fn schemes() -> Vec<GluingData> {
    let mut out: Vec<GluingData> = [t(), b(), e(), f3(), c2xb()].iter().map(GluingData::affine).collect();
    out.extend([x2(), x3(), y2(), w(), t_plus_t(), b_plus_e()]);
    out
}

pub fn scheme_by_name(name: &str) -> Option<GluingData> {
    schemes().into_iter().find(|g| g.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_sizes_bounded() {
        let ms = monoids();
        for (i, a) in ms.iter().enumerate() {
            assert!(a.size() <= 6);
            for b in &ms[i + 1..] {
                assert_ne!(a.name(), b.name());
            }
        }
    }

    #[test]
    fn cyclic_tables() {
        let f = f3();
        assert_eq!(f.mul(1, 2), 3);
        assert_eq!(f.mul(3, 1), 3);
        let z = z3();
        assert_eq!(z.mul(1, 2), 1);
        assert_eq!(z.mul(2, 2), 2);
        assert_eq!(c3().mul(2, 2), 1);
    }
}
