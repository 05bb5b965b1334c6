//! Values frozen from an independent exact-fraction Lagrange computation done outside this
//! crate. Each list is ascending coefficients.

use notemap::mapping::{interpolate, InterpolationProblem, Pinning};
use notemap::poly::{denominator_profile, RationalPolynomial};
use notemap::rational::{int, parse_rational, Rational};
use notemap::solver::{build_vandermonde, determinant, gaussian_solve, SolveKind};
use notemap::NoteSet;

fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

fn poly(coeffs: &[&str]) -> RationalPolynomial {
    RationalPolynomial::new(coeffs.iter().map(|c| q(c)).collect())
}

fn solve(from: &[i64], to: &[i64], pinning: Pinning) -> RationalPolynomial {
    let p = InterpolationProblem::from_sets(&NoteSet::from_ints(from), &NoteSet::from_ints(to))
        .unwrap();
    interpolate(&p.with_pinning(pinning)).unwrap()
}

#[test]
fn augmented_sixth_cubics() {
    assert_eq!(
        solve(&[-7, -2, 2, 8], &[-5, -2, 3, 7], Pinning::minimal()),
        poly(&["307/675", "3469/2700", "61/5400", "-47/5400"])
    );
    assert_eq!(
        solve(&[-7, -2, 2, 8], &[-8, -3, 1, 9], Pinning::minimal()),
        poly(&["-239/225", "223/225", "7/450", "1/450"])
    );
}

#[test]
fn figure_one_functions() {
    let k = solve(&[-7, 1, 7, 15], &[-8, 1, 8, 15], Pinning::minimal());
    assert_eq!(k, poly(&["-35/176", "1105/924", "5/1232", "-1/924"]));
    assert_eq!(k.evaluate(&int(15)), int(15));
    assert_eq!(k.evaluate(&int(5)), q("885/154"));
    assert_eq!(
        solve(&[-5, 0, 3, 6], &[-6, -1, 2, 7], Pinning::minimal()),
        poly(&["-1", "28/33", "2/99", "1/99"])
    );
}

#[test]
fn figure_two_closing_map() {
    assert_eq!(
        solve(
            &[28, -14, -2, -32, 8, 26],
            &[-6, 1, 6, 10, 17, 22],
            Pinning::minimal()
        ),
        poly(&[
            "2294746/358875",
            "993451/2871000",
            "93287/1071840",
            "162101/26796000",
            "-44537/321552000",
            "-1289/160776000",
        ])
    );
}

#[test]
fn progression_functions_with_cubic_pinned() {
    let pin = || Pinning::pin([3]);
    let cases: [(&[i64], &[i64], &[&str]); 10] = [
        (&[0, 4, 7, 0], &[0, 5, 8, 0], &["0", "39/28", "-1/28"]),
        (&[0, 5, 8, 0], &[11, 2, 7, 11], &["11", "-119/30", "13/30"]),
        (
            &[11, 2, 7, 11],
            &[0, 4, 7, 0],
            &["-77/90", "59/20", "-47/180"],
        ),
        (&[2, 6, 9, 2], &[2, 7, 11, 2], &["-5/14", "97/84", "1/84"]),
        (&[2, 7, 11, 2], &[1, 4, 9, 1], &["73/90", "-1/20", "13/180"]),
        (&[1, 4, 9, 1], &[2, 6, 9, 2], &["3/10", "43/24", "-11/120"]),
        (
            &[5, 8, 1, 5],
            &[2, 7, 11, 2],
            &["337/21", "-157/28", "47/84"],
        ),
        (
            &[2, 7, 11, 2],
            &[0, 4, 7, 0],
            &["-151/90", "17/20", "-1/180"],
        ),
        (&[7, 10, 3, 7], &[4, 9, 1, 4], &["3/2", "-47/84", "11/84"]),
        (
            &[4, 9, 1, 4],
            &[2, 6, 9, 2],
            &["129/10", "-103/24", "47/120"],
        ),
    ];
    for (from, to, expected) in cases {
        let f = solve(from, to, pin());
        assert_eq!(f, poly(expected), "{from:?} -> {to:?}");
        assert_eq!(f.coefficients().len(), 4, "pinned coefficient is kept");
        assert_eq!(f.coefficient(3), int(0));
    }
}

#[test]
fn denominators_of_c_major_functions() {
    let f3 = solve(&[11, 2, 7, 11], &[0, 4, 7, 0], Pinning::pin([3]));
    let p = denominator_profile(&f3);
    assert_eq!(p.gcd, 10.into());
    assert_eq!(p.lcm, 180.into());
}

#[test]
fn solver_reference_values() {
    let nodes: Vec<Rational> = [0, 1, 2].iter().map(|&v| int(v)).collect();
    assert_eq!(determinant(&build_vandermonde(&nodes, 2)).unwrap(), int(-2));
    let chord: Vec<Rational> = [0, 4, 7, 0].iter().map(|&v| int(v)).collect();
    let v = build_vandermonde(&chord, 3);
    let outcome = gaussian_solve(&v, &[int(0), int(5), int(8), int(0)]).unwrap();
    assert_eq!(outcome.kind, SolveKind::Underdetermined);
    assert_eq!(outcome.free_columns, vec![0]);
    assert_eq!(outcome.rank, 3);
}
