//! Closed forms of `Ψ(δ+a, δ+b, δ+c, δ+d)` for every pair of edge classes
//! inside a degree window `[δ, δ+3]`, transcribed as factored polynomials in
//! `δ`, and the machinery that checks them against direct evaluation.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::indices::psi_class;
use crate::rational::{self, Rational};

/// Polynomial in `δ`, coefficients in ascending order of power.
pub type Poly = &'static [i64];

/// One table entry: offsets `(a, b, c, d)` and the closed form
/// `Π num / Π den`, each a product of small polynomials in `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub offsets: [usize; 4],
    pub num: &'static [Poly],
    pub den: &'static [Poly],
}

const D: Poly = &[0, 1];
const D1: Poly = &[1, 1];
const D2: Poly = &[2, 1];
const D3: Poly = &[3, 1];

const fn row(offsets: [usize; 4], num: &'static [Poly], den: &'static [Poly]) -> TableRow {
    TableRow { offsets, num, den }
}

const ZERO: &[Poly] = &[&[0]];
const ONE: &[Poly] = &[&[1]];

/// All entries, in the order they appear when read row by row.
pub const TABLE1: [TableRow; 55] = [
    row([0, 0, 0, 0], ZERO, ONE),
    row([0, 0, 0, 1], ONE, &[D1]),
    row([0, 0, 0, 2], &[&[4]], &[D2]),
    row([0, 0, 0, 3], &[&[9]], &[D3]),
    row([0, 0, 1, 1], &[&[2], &[1, 2]], &[D, D1]),
    row([0, 0, 1, 2], &[&[2, 3], &[4, 3]], &[D, D1, D2]),
    row([0, 0, 1, 3], &[&[2], &[3, 4], &[3, 2]], &[D, D1, D3]),
    row([0, 0, 2, 2], &[&[16], D1], &[D, D2]),
    row([0, 0, 2, 3], &[&[6, 5], &[12, 5]], &[D, D2, D3]),
    row([0, 0, 3, 3], &[&[18], &[3, 2]], &[D, D3]),
    row([0, 1, 0, 1], ZERO, ONE),
    row([0, 1, 0, 2], &[D], &[D1, D2]),
    row([0, 1, 0, 3], &[&[4], D], &[D1, D3]),
    row([0, 1, 1, 1], ONE, &[D]),
    row([0, 1, 1, 2], &[&[4], D1], &[D, D2]),
    row([0, 1, 1, 3], &[&[9], D1], &[D, D3]),
    row([0, 1, 2, 2], &[&[2, 3], &[4, 3]], &[D, D1, D2]),
    row([0, 1, 2, 3], &[&[4], &[3, 2], &[3, 6, 2]], &[D, D1, D2, D3]),
    row([0, 1, 3, 3], &[&[3, 5], &[9, 5]], &[D, D1, D3]),
    row([0, 2, 0, 2], ZERO, ONE),
    row([0, 2, 0, 3], &[D], &[D2, D3]),
    row([0, 2, 1, 1], &[&[2]], &[D, D1, D2]),
    row([0, 2, 1, 2], &[D2], &[D, D1]),
    row([0, 2, 1, 3], &[&[2], &[3, 2], &[3, 3, 1]], &[D, D1, D2, D3]),
    row([0, 2, 2, 2], &[&[4]], &[D]),
    row([0, 2, 2, 3], &[&[9], D2], &[D, D3]),
    row([0, 2, 3, 3], &[&[2], &[3, 2], &[9, 4]], &[D, D2, D3]),
    row([0, 3, 0, 3], ZERO, ONE),
    row([0, 3, 1, 1], &[&[-1, 1], &[-3, 1]], &[D, D1, D3]),
    row([0, 3, 1, 2], &[&[4], &[3, 2]], &[D, D1, D2, D3]),
    row([0, 3, 1, 3], &[D3], &[D, D1]),
    row([0, 3, 2, 2], &[&[4, 1], &[6, 1]], &[D, D2, D3]),
    row([0, 3, 2, 3], &[&[4], D3], &[D, D2]),
    row([0, 3, 3, 3], &[&[9]], &[D]),
    row([1, 1, 1, 1], ZERO, ONE),
    row([1, 1, 1, 2], ONE, &[D2]),
    row([1, 1, 1, 3], &[&[4]], &[D3]),
    row([1, 1, 2, 2], &[&[2], &[3, 2]], &[D1, D2]),
    row([1, 1, 2, 3], &[&[5, 3], &[7, 3]], &[D1, D2, D3]),
    row([1, 1, 3, 3], &[&[16], D2], &[D1, D3]),
    row([1, 2, 1, 2], ZERO, ONE),
    row([1, 2, 1, 3], &[D1], &[D2, D3]),
    row([1, 2, 2, 2], ONE, &[D1]),
    row([1, 2, 2, 3], &[&[4], D2], &[D1, D3]),
    row([1, 2, 3, 3], &[&[5, 3], &[7, 3]], &[D1, D2, D3]),
    row([1, 3, 1, 3], ZERO, ONE),
    row([1, 3, 2, 2], &[&[2]], &[D1, D2, D3]),
    row([1, 3, 2, 3], &[D3], &[D1, D2]),
    row([1, 3, 3, 3], &[&[4]], &[D1]),
    row([2, 2, 2, 2], ZERO, ONE),
    row([2, 2, 2, 3], ONE, &[D3]),
    row([2, 2, 3, 3], &[&[2], &[5, 2]], &[D2, D3]),
    row([2, 3, 2, 3], ZERO, ONE),
    row([2, 3, 3, 3], ONE, &[D2]),
    row([3, 3, 3, 3], ZERO, ONE),
];

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn expand(factors: &[Poly]) -> Vec<i64> {
    factors.iter().fold(vec![1], |acc, f| poly_mul(&acc, f))
}

fn eval(coeffs: &[i64], delta: u64) -> BigInt {
    let x = BigInt::from(delta);
    coeffs.iter().rev().fold(BigInt::zero(), |acc, &c| acc * &x + BigInt::from(c))
}

impl TableRow {
    /// Expanded numerator coefficients in `δ`.
    pub fn numerator(&self) -> Vec<i64> {
        expand(self.num)
    }

    /// Expanded denominator coefficients in `δ`.
    pub fn denominator(&self) -> Vec<i64> {
        expand(self.den)
    }

    /// Both degree pairs as offsets from `δ`.
    pub fn class_pair(&self) -> ((usize, usize), (usize, usize)) {
        let [a, b, c, d] = self.offsets;
        ((a, b), (c, d))
    }

    /// True when both offset pairs name the same class, so `Ψ` vanishes.
    pub fn is_identical_pair(&self) -> bool {
        let (p, q) = self.class_pair();
        p == q
    }
}

/// Evaluates a row's closed form at `δ = delta`.
pub fn table1_value(row: &TableRow, delta: u64) -> Rational {
    assert!(delta >= 1, "the degree window starts at 1");
    Rational::new(eval(&row.numerator(), delta), eval(&row.denominator(), delta))
}

/// `Ψ` evaluated straight from its definition at the row's shifted degrees.
pub fn direct_value(row: &TableRow, delta: u64) -> Rational {
    let [a, b, c, d] = row.offsets.map(|o| delta as usize + o);
    psi_class(a, b, c, d).expect("shifted degrees are positive")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMismatch {
    pub offsets: [usize; 4],
    pub delta: u64,
    #[serde(with = "rational")]
    pub table: Rational,
    #[serde(with = "rational")]
    pub direct: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableVerification {
    pub delta_max: u64,
    pub rows: usize,
    pub rows_verified: usize,
    pub mismatches: Vec<TableMismatch>,
}

impl TableVerification {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.rows_verified == self.rows
    }

    pub fn summary(&self) -> String {
        format!("{}/{} rows verified, {} mismatches", self.rows_verified, self.rows, self.mismatches.len())
    }
}

/// Compares every row with direct evaluation for all `δ ∈ [1, delta_max]`.
pub fn verify_rows(rows: &[TableRow], delta_max: u64) -> TableVerification {
    let mut mismatches = Vec::new();
    let mut rows_verified = 0;
    for row in rows {
        let before = mismatches.len();
        for delta in 1..=delta_max {
            let table = table1_value(row, delta);
            let direct = direct_value(row, delta);
            if table != direct {
                mismatches.push(TableMismatch { offsets: row.offsets, delta, table, direct });
            }
        }
        if mismatches.len() == before {
            rows_verified += 1;
        }
    }
    TableVerification { delta_max, rows: rows.len(), rows_verified, mismatches }
}

pub fn verify_table1(delta_max: u64) -> TableVerification {
    verify_rows(&TABLE1, delta_max)
}

/// Every unordered pair of offset classes `{{a,b},{c,d}}` with
/// `0 ≤ a ≤ b ≤ 3`, `0 ≤ c ≤ d ≤ 3`, listed with the smaller class first.
pub fn class_pair_multisets() -> BTreeSet<[usize; 4]> {
    let classes: Vec<(usize, usize)> = (0..4).flat_map(|a| (a..4).map(move |b| (a, b))).collect();
    let mut out = BTreeSet::new();
    for (x, &p) in classes.iter().enumerate() {
        for &q in &classes[x..] {
            out.insert([p.0, p.1, q.0, q.1]);
        }
    }
    out
}

/// Sign of every row at one `δ`.
pub fn sign_census(delta: u64) -> Vec<([usize; 4], Ordering)> {
    TABLE1
        .iter()
        .map(|row| {
            let v = table1_value(row, delta);
            let sign = if v.is_zero() {
                Ordering::Equal
            } else if v.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
            (row.offsets, sign)
        })
        .collect()
}

/// The one row that can go negative: `{{δ, δ+3}, {δ+1, δ+1}}`.
pub const CRITICAL_ROW: [usize; 4] = [0, 3, 1, 1];

impl TableRow {
    pub fn is_critical(&self) -> bool {
        self.offsets == CRITICAL_ROW
    }
}

/// `(δ−1)(δ−3) / (δ(δ+1)(δ+3))`, the critical row, as a plain function.
pub fn critical_value(delta: u64) -> Rational {
    let d = delta as i128;
    crate::rational::ratio((d - 1) * (d - 3), d * (d + 1) * (d + 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn find(offsets: [usize; 4]) -> &'static TableRow {
        TABLE1.iter().find(|r| r.offsets == offsets).unwrap()
    }

    #[test]
    fn spot_values() {
        assert_eq!(table1_value(find([0, 0, 0, 1]), 4), ratio(1, 5));
        assert_eq!(table1_value(find([0, 3, 1, 1]), 2), ratio(-1, 30));
        for delta in [1, 7, 99] {
            assert!(table1_value(find([3, 3, 3, 3]), delta).is_zero());
        }
    }

    #[test]
    fn expanded_coefficients() {
        let r = find([0, 3, 1, 1]);
        assert_eq!(r.numerator(), vec![3, -4, 1]);
        assert_eq!(r.denominator(), vec![0, 3, 4, 1]);
    }

    #[test]
    fn every_row_matches_at_small_delta() {
        let report = verify_table1(1);
        assert!(report.is_clean(), "{report:?}");
        assert_eq!(report.summary(), "55/55 rows verified, 0 mismatches");
    }

    #[test]
    fn doctored_row_is_reported_at_every_delta() {
        let mut rows = TABLE1;
        let idx = rows.iter().position(|r| r.offsets == [0, 0, 0, 2]).unwrap();
        rows[idx] = row([0, 0, 0, 2], &[&[4]], &[D3]);
        let report = verify_rows(&rows, 20);
        assert_eq!(report.rows_verified, 54);
        assert_eq!(report.mismatches.len(), 20);
        assert!(report.mismatches.iter().all(|m| m.offsets == [0, 0, 0, 2]));
        assert!(!report.is_clean());
    }

    #[test]
    fn rows_cover_each_class_pair_once() {
        let encoded: Vec<_> = TABLE1.iter().map(|r| r.offsets).collect();
        let unique: BTreeSet<_> = encoded.iter().copied().collect();
        assert_eq!(unique.len(), encoded.len());
        assert_eq!(unique, class_pair_multisets());
    }

    #[test]
    fn critical_value_matches_row() {
        for delta in 1..50 {
            assert_eq!(critical_value(delta), table1_value(find(CRITICAL_ROW), delta));
        }
    }
}
