use super::*;
use num_traits::{One, Zero};

fn nu() -> ValuationMap {
    ValuationMap::default()
}

fn m(a: Q, b: Q, x: i64, y: i64) -> Monomial {
    Monomial::ab(a, b, x, y)
}

fn s(c: Q, terms: &[(i64, Monomial)]) -> NovikovSeries {
    series(nu(), c, terms.iter().copied())
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn add_cancels_and_keeps_distinct_terms() {
    let c = qi(20);
    let ta_y = m(qi(1), qi(0), 0, -1);
    let one = Monomial::one();
    let sum = s(c, &[(1, one), (1, ta_y)]) + s(c, &[(-1, ta_y)]);
    assert!(sum.is_one());

    let xy = s(c, &[(1, Monomial::x())]) + s(c, &[(1, Monomial::y())]);
    assert_eq!(xy.len(), 2);

    let a = s(c, &[(1, m(qi(0), qi(1), 0, -1))]);
    let b = s(c, &[(2, m(qi(1), qi(1), 0, -2))]);
    let ab = &a + &b;
    assert_eq!(ab.len(), 2);
    assert_eq!(ab.coeff(&m(qi(1), qi(1), 0, -2)), Rat::from_integer(2));
}

#[test]
fn add_truncates_to_smaller_cutoff() {
    let a = s(qi(20), &[(1, m(qi(5), qi(0), 0, 0))]);
    let b = s(qi(8), &[(1, Monomial::one())]);
    let sum = &a + &b;
    assert_eq!(sum.cutoff(), qi(8));
    assert!(sum.is_one());
}

#[test]
fn mul_examples() {
    let c = qi(20);
    let qm = m(qi(1), qi(0), 0, -2);
    let p = s(c, &[(1, Monomial::one()), (1, qm)]);
    let n = s(c, &[(1, Monomial::one()), (-1, qm)]);
    let expect = s(c, &[(1, Monomial::one()), (-1, qm.pow(2))]);
    assert_eq!(&p * &n, expect);

    let y = NovikovSeries::y(nu(), c);
    let t = s(c, &[(1, m(qi(1), qi(0), 0, -1))]);
    assert_eq!(&y * &t, s(c, &[(1, m(qi(1), qi(0), 0, 0))]));

    let one_minus_q = n;
    let a = one_minus_q.pow(-2).unwrap();
    let b = one_minus_q.pow(2).unwrap();
    assert!((&a * &b).is_one());
}

#[test]
fn invert_geometric_series() {
    let c = qi(20);
    let q = m(q(1, 2), qi(0), 1, -1);
    let inv = s(c, &[(1, Monomial::one()), (1, q)]).invert_unit().unwrap();
    // val(q) = 1, so 20 terms survive with alternating signs.
    assert_eq!(inv.len(), 20);
    for k in 0..20 {
        let expect = if k % 2 == 0 { 1 } else { -1 };
        assert_eq!(inv.coeff(&q.pow(k)), Rat::from_integer(expect));
    }
}

#[test]
fn invert_scaled_monomial() {
    let inv = s(qi(20), &[(2, Monomial::x())]).invert_unit().unwrap();
    assert_eq!(inv.len(), 1);
    assert_eq!(inv.coeff(&m(qi(0), qi(0), -1, 0)), Rat::new(1, 2));
}

#[test]
fn inverse_square_gives_linear_coefficients() {
    let c = qi(20);
    let qm = m(qi(1), qi(0), 0, -2);
    let sq = s(c, &[(1, Monomial::one()), (-1, qm)]).pow(2).unwrap();
    let inv = sq.invert_unit().unwrap();
    for k in 0..10 {
        assert_eq!(inv.coeff(&qm.pow(k)), Rat::from_integer(k + 1));
    }
    assert_eq!(inv.len(), 10);
}

#[test]
fn invert_errors() {
    assert!(matches!(
        NovikovSeries::zero(nu(), qi(5)).invert_unit(),
        Err(NovikovError::NotAUnit(_))
    ));
    let bad = s(qi(5), &[(1, Monomial::one()), (1, Monomial::x())]);
    assert_eq!(bad.invert_unit(), Err(NovikovError::NonNilpotentRemainder));
}

#[test]
fn invert_with_positive_lead_loses_precision() {
    // T^B/y·(1 + T^A/y²) inverts to a series known up to C − 2·val(T^B).
    let c = qi(20);
    let s1 = s(c, &[(1, m(qi(0), qi(1), 0, -1)), (1, m(qi(1), qi(1), 0, -3))]);
    let inv = s1.invert_unit().unwrap();
    assert_eq!(inv.cutoff(), qi(18));
    assert!((&s1 * &inv).eq_up_to_cutoff(&NovikovSeries::one(nu(), c), qi(18)));
}

#[test]
fn pow_examples() {
    let c = qi(20);
    let u = m(q(1, 2), qi(0), 1, -1);
    let cube = s(c, &[(1, Monomial::one()), (1, u)]).pow(3).unwrap();
    let expect = s(c, &[(1, Monomial::one()), (3, u), (3, u.pow(2)), (1, u.pow(3))]);
    assert_eq!(cube, expect);

    let any = s(c, &[(3, Monomial::x()), (1, u)]);
    assert!(any.pow(0).unwrap().is_one());

    let qm = m(qi(1), qi(0), 0, -2);
    let inv4 = s(c, &[(1, Monomial::one()), (-1, qm)]).pow(-4).unwrap();
    for k in 0..10 {
        assert_eq!(inv4.coeff(&qm.pow(k)), Rat::from_integer(binom(k + 3, 3)));
    }
}

#[test]
fn substitute_change_of_variables() {
    let c = qi(20);
    let x = NovikovSeries::x(nu(), c);
    let y = NovikovSeries::y(nu(), c);
    let w = &x + &y;
    let h = s(c, &[(1, Monomial::one()), (1, m(qi(1), qi(0), 0, -1))]);
    let out = w.substitute(&(&x * &h), &y).unwrap();
    let expect = s(c, &[(1, Monomial::x()), (1, m(qi(1), qi(0), 1, -1)), (1, Monomial::y())]);
    assert_eq!(out, expect);
    assert!(out.identical(&expect));
}

#[test]
fn substitute_identity() {
    let c = qi(20);
    let w = s(
        c,
        &[
            (1, Monomial::x()),
            (1, Monomial::y()),
            (1, m(qi(1), qi(2), -1, -3)),
            (1, m(qi(0), qi(1), 0, -1)),
            (2, m(qi(1), qi(1), 0, -2)),
        ],
    );
    let out = w.substitute(&NovikovSeries::x(nu(), c), &NovikovSeries::y(nu(), c)).unwrap();
    assert!(out.identical(&w));
}

#[test]
fn substitute_rejects_bad_images() {
    let c = qi(10);
    let w = NovikovSeries::x(nu(), c);
    let x_plus_y = &NovikovSeries::x(nu(), c) + &NovikovSeries::y(nu(), c);
    assert!(matches!(
        w.substitute(&x_plus_y, &NovikovSeries::y(nu(), c)),
        Err(NovikovError::UnsupportedSubstitution(_))
    ));
    assert!(matches!(
        w.substitute(&NovikovSeries::zero(nu(), c), &NovikovSeries::y(nu(), c)),
        Err(NovikovError::UnsupportedSubstitution(_))
    ));
}

#[test]
fn negative_shift_lowers_cutoff() {
    // x ↦ T^{-A/2-B} x y² lowers the valuation of an x-term by 2.
    let c = qi(20);
    let w = s(c, &[(1, m(q(1, 2), qi(1), 1, -2)), (1, Monomial::y())]);
    let img_x = s(c, &[(1, m(q(-1, 2), qi(-1), 1, 2))]);
    let out = w.substitute(&img_x, &NovikovSeries::y(nu(), c)).unwrap();
    assert_eq!(out.cutoff(), qi(18));
    assert_eq!(out.coeff(&Monomial::x()), Rat::one());
}

#[test]
fn eq_up_to_cutoff_examples() {
    let one = NovikovSeries::one(nu(), qi(200));
    let far = s(qi(200), &[(1, Monomial::one()), (1, m(qi(0), qi(100), 0, 0))]);
    assert!(one.eq_up_to_cutoff(&far, qi(5)));
    let qm = m(qi(1), qi(0), 0, -2);
    let a = s(qi(20), &[(1, Monomial::one()), (1, qm)]);
    let b = s(qi(20), &[(1, Monomial::one()), (-1, qm)]);
    assert!(!a.eq_up_to_cutoff(&b, qi(5)));
}

#[test]
fn canonical_order_is_valuation_then_lex() {
    let w = s(
        qi(20),
        &[
            (1, m(qi(1), qi(0), 0, -1)),
            (1, m(qi(0), qi(2), 0, 0)),
            (1, Monomial::y()),
            (1, Monomial::x()),
        ],
    );
    let order: Vec<Monomial> = w.iter().map(|(m, _)| *m).collect();
    assert_eq!(
        order,
        vec![Monomial::y(), Monomial::x(), m(qi(0), qi(2), 0, 0), m(qi(1), qi(0), 0, -1)]
    );
}

#[test]
fn json_round_trip_is_bit_exact() {
    let text = r#"{"cutoff":"20","nu":{"A":"2","B":"1"},"terms":[{"c":"3","tA":"1/2","tB":"1","x":1,"y":-2}]}"#;
    let s1 = NovikovSeries::from_json(text).unwrap();
    assert_eq!(s1.to_json(), text);
    let big = "123456789012345678901234567891/2";
    let t2 = format!(
        r#"{{"cutoff":"7/2","nu":{{"A":"3","B":"1"}},"terms":[{{"c":"-1/3","tA":"0","tB":"0","x":0,"y":1}},{{"c":"{big}","tA":"1","tB":"0","x":-1,"y":0}}]}}"#
    );
    let s2 = NovikovSeries::from_json(&t2).unwrap();
    assert_eq!(s2.to_json(), t2);
}

#[test]
fn json_rejects_malformed() {
    let beyond = r#"{"cutoff":"2","nu":{"A":"2","B":"1"},"terms":[{"c":"1","tA":"1","tB":"0","x":0,"y":0}]}"#;
    assert!(NovikovSeries::from_json(beyond).is_err());
    let zero = r#"{"cutoff":"20","nu":{"A":"2","B":"1"},"terms":[{"c":"0","tA":"1","tB":"0","x":0,"y":0}]}"#;
    assert!(NovikovSeries::from_json(zero).is_err());
    let nu_bad = r#"{"cutoff":"20","nu":{"A":"1","B":"2"},"terms":[]}"#;
    assert!(NovikovSeries::from_json(nu_bad).is_err());
}

#[test]
fn display_is_readable() {
    let w = s(qi(20), &[(1, Monomial::y()), (1, m(qi(0), qi(1), 0, -1)), (-2, m(qi(1), qi(1), 0, -2))]);
    assert_eq!(w.to_string(), "y + T^{B}y^-1 - 2T^{A+B}y^-2");
    assert_eq!(NovikovSeries::zero(nu(), qi(1)).to_string(), "0");
    assert!(Rat::zero().is_zero());
}
