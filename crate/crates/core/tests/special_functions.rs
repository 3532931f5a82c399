mod common;

use itep_core::special::{bessel_j, hankel1, int10, int7, int8, int9, series_coefficients, EULER_GAMMA};
use num_complex::Complex64;

// Reference values from 40-digit mpmath evaluations.
// (x, re H0, im H0, re H1, im H1) at real x
const REAL_HANKEL: &[(f64, f64, f64, f64, f64)] = &[
    (1e-08, 1.0, -11.80077387717953, 5e-09, -63661977.236758195),
    (
        0.0001,
        0.9999999975,
        -5.937289069709337,
        4.99999999375e-05,
        -6366.198036455761,
    ),
    (
        0.01,
        0.9999750001562495,
        -3.005455637083646,
        0.004999937500260416,
        -63.67859628206066,
    ),
    (
        0.3,
        0.9776262465382961,
        -0.8072735778045195,
        0.148318816273104,
        -2.2931051383885293,
    ),
    (
        1.0,
        0.7651976865579666,
        0.08825696421567696,
        0.4400505857449335,
        -0.7812128213002887,
    ),
    (
        2.5,
        -0.048383776468198,
        0.4980703596152319,
        0.49709410246427405,
        0.1459181379667858,
    ),
    (
        5.0,
        -0.1775967713143383,
        -0.30851762524903376,
        -0.32757913759146523,
        0.14786314339122683,
    ),
    (
        7.9,
        0.19436184484127833,
        0.20652094814437572,
        0.21917939992175114,
        -0.1817210772805732,
    ),
    (
        11.5,
        -0.06765394811166522,
        -0.22523211169118787,
        -0.22837862066532347,
        0.057942547143000823,
    ),
    (
        12.0,
        0.047689310796833535,
        -0.22523731263436145,
        -0.2234471044906276,
        -0.05709921826089652,
    ),
    (
        12.5,
        0.1468840547004211,
        -0.1712143068446693,
        -0.16548380461475973,
        -0.1538382565375012,
    ),
    (
        14.0,
        0.17107347611045867,
        0.1271925685821837,
        0.13337515469879324,
        -0.16664484185617226,
    ),
    (
        20.0,
        0.16702466434058316,
        0.06264059680938383,
        0.06683312417585005,
        -0.1655116143625213,
    ),
    (
        33.3,
        0.0633384859475209,
        0.1228974991350375,
        0.12386214790148026,
        -0.06150072280778538,
    ),
    (
        50.0,
        0.055812327669251816,
        -0.09806499547007708,
        -0.09751182812517514,
        -0.05679566856201477,
    ),
];
// (t, re H0(it), im H0(it), re H1(it), im H1(it))
const IMAG_HANKEL: &[(f64, f64, f64, f64, f64)] = &[
    (
        1e-08,
        0.0,
        -11.800773877179532,
        -63661977.236758076,
        2.1382117680737565e-42,
    ),
    (
        0.001,
        0.0,
        -4.471419165394754,
        -636.6173775033649,
        2.1895288505075267e-47,
    ),
    (0.5, 0.0, -0.5885034586972077, -1.0545231687568029, 0.0),
    (1.0, 0.0, -0.26803248203398855, -0.38318604387456484, 0.0),
    (1.99, 0.0, -0.07340338501239192, -0.0902202018205418, 0.0),
    (2.01, 0.0, -0.07162250068937043, -0.08787955189637521, 0.0),
    (3.0, 0.0, -0.02211585537455569, -0.02556437804392544, 0.0),
    (6.0, 0.0, -0.0007919513859262768, -0.0008555658647850839, 0.0),
    (10.0, 0.0, -1.1319139224400061e-05, -1.1872177911109038e-05, 0.0),
    (15.0, 0.0, -6.251311080178379e-08, -6.456425442791557e-08, 0.0),
    (25.0, 0.0, -2.205353745180638e-12, -2.2490363727857245e-12, 0.0),
    (45.0, 0.0, -3.395383622786778e-21, -3.432905018700494e-21, 0.0),
];
// (re z, im z, re H0, im H0, re H1, im H1)
const COMPLEX_HANKEL: &[(f64, f64, f64, f64, f64, f64)] = &[
    (
        0.5,
        0.5,
        0.38174392034651833,
        -0.35203310670701476,
        -0.3682548488016865,
        -0.6893689508605568,
    ),
    (
        3.0,
        1.0,
        -0.07060534904185109,
        0.14631021959130672,
        0.1446405526503207,
        0.09535526556271705,
    ),
    (
        8.0,
        2.0,
        0.02622466934794999,
        0.026718279018131397,
        0.028666706403011583,
        -0.025103481926257516,
    ),
    (
        10.0,
        -3.0,
        -4.959918862943288,
        0.37861569817109425,
        0.14356441110785714,
        4.91435670408548,
    ),
    (
        15.0,
        4.0,
        0.00022376974600664133,
        0.0036937654826734094,
        0.003732890306854296,
        -0.00011180126461346282,
    ),
    (
        30.0,
        5.0,
        -0.0006402160720551468,
        -0.0007341860186983523,
        -0.000746613898502763,
        0.0006301559833911193,
    ),
    (
        1.0,
        3.0,
        0.019728705760059147,
        -0.008804881208716137,
        -0.009173003685504234,
        -0.022918510099310334,
    ),
];
// (order, x, J_order(x))
const BESSEL_J: &[(i32, f64, f64)] = &[
    (0, 0.1, 0.99750156206604),
    (0, 1.0, 0.7651976865579666),
    (0, 4.5, -0.32054250898512143),
    (0, 13.0, 0.20692610237706782),
    (0, 27.7, -0.031089043529072623),
    (0, 50.0, 0.055812327669251816),
    (0, 99.0, -0.05447423527049907),
    (1, 0.1, 0.049937526036242),
    (1, 1.0, 0.4400505857449335),
    (1, 4.5, -0.23106043192337064),
    (1, 13.0, -0.07031805212177837),
    (1, 27.7, 0.1478288893554177),
    (1, 50.0, -0.09751182812517514),
    (1, 99.0, -0.05912294255307407),
    (2, 0.1, 0.0012489586587999188),
    (2, 1.0, 0.11490348493190047),
    (2, 4.5, 0.2178489836858456),
    (2, 13.0, -0.21774426424195678),
    (2, 27.7, 0.04176260954751433),
    (2, 50.0, -0.05971280079425882),
    (2, 99.0, 0.05327983239063899),
    (5, 0.1, 2.603081790964441e-09),
    (5, 1.0, 0.00024975773021123444),
    (5, 4.5, 0.19471465863871368),
    (5, 13.0, 0.13161955992748078),
    (5, 27.7, 0.12086619673704971),
    (5, 50.0, -0.08140024769656964),
    (5, 99.0, -0.06528100898032652),
    (10, 0.1, 2.6905328954342157e-20),
    (10, 1.0, 2.6306151236874534e-10),
    (10, 4.5, 0.000573009776671645),
    (10, 13.0, 0.2337820102030189),
    (10, 27.7, 0.14066200319420466),
    (10, 50.0, -0.11384784914946938),
    (10, 99.0, 0.019217738228763877),
    (20, 0.1, 3.9194377208586175e-45),
    (20, 1.0, 3.8735030085246576e-25),
    (20, 4.5, 3.5665470983611762e-12),
    (20, 13.0, 0.0008971406296777854),
    (20, 27.7, -0.18153092522838715),
    (20, 50.0, -0.11670435275957974),
    (20, 99.0, 0.07763240401855474),
];

fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

#[test]
fn hankel_real_axis_matches_reference() {
    for &(x, h0r, h0i, h1r, h1i) in REAL_HANKEL {
        let z = Complex64::new(x, 0.0);
        let e0 = rel_err(hankel1(0, z).unwrap(), Complex64::new(h0r, h0i));
        let e1 = rel_err(hankel1(1, z).unwrap(), Complex64::new(h1r, h1i));
        assert!(e0 <= 1e-10 && e1 <= 1e-10, "x={x}: {e0:e} {e1:e}");
    }
}

#[test]
fn hankel_imaginary_axis_matches_reference() {
    for &(t, h0r, h0i, h1r, h1i) in IMAG_HANKEL {
        let z = Complex64::new(0.0, t);
        let e0 = rel_err(hankel1(0, z).unwrap(), Complex64::new(h0r, h0i));
        let e1 = rel_err(hankel1(1, z).unwrap(), Complex64::new(h1r, h1i));
        assert!(e0 <= 1e-10 && e1 <= 1e-10, "t={t}: {e0:e} {e1:e}");
    }
}

#[test]
fn hankel_general_complex_matches_reference() {
    for &(re, im, h0r, h0i, h1r, h1i) in COMPLEX_HANKEL {
        if im < 0.0 && re == 0.0 {
            continue;
        }
        let z = Complex64::new(re, im);
        let e0 = rel_err(hankel1(0, z).unwrap(), Complex64::new(h0r, h0i));
        let e1 = rel_err(hankel1(1, z).unwrap(), Complex64::new(h1r, h1i));
        assert!(e0 <= 1e-9 && e1 <= 1e-9, "z={z}: {e0:e} {e1:e}");
    }
}

#[test]
fn hankel_spot_values() {
    // H0(i) = (2/(i pi)) K0(1), K0(1) = 0.42102443824070834
    let h = hankel1(0, Complex64::new(0.0, 1.0)).unwrap();
    assert!(h.re.abs() < 1e-15);
    assert!((h.im + 0.268032482033988549).abs() < 1e-12);
    let h = hankel1(0, Complex64::new(1.0, 0.0)).unwrap();
    assert!((h.re - 0.7651976866).abs() < 1e-10);
    assert!((h.im - 0.0882569642).abs() < 1e-10);
}

#[test]
fn hankel_derivative_relation() {
    // d/dz H0 = -H1, five-point differences along the real and imaginary axes

    for &x in &[0.05, 0.7, 3.0, 11.99, 12.01, 30.0] {
        for dir in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let z = if dir.re == 1.0 {
                Complex64::new(x, 0.0)
            } else {
                Complex64::new(0.0, x)
            };
            let h = 1e-3 * x.min(1.0) * dir;
            let f = |w: Complex64| hankel1(0, w).unwrap();
            let fd = (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
            let h1 = hankel1(1, z).unwrap();
            assert!(rel_err(-fd, h1) < 1e-8, "z={z}");
        }
    }
}

#[test]
fn bessel_j_matches_reference() {
    for &(n, x, want) in BESSEL_J {
        let got = bessel_j(n, x).unwrap();
        let tol = if x <= 50.0 { 1e-12 } else { 1e-11 };
        assert!((got - want).abs() <= tol, "J_{n}({x}) = {got} vs {want}");
    }
}

#[test]
fn log_series_reproduces_hankel() {
    // H0(kr) = sum_m (c5 + c6 ln(k/2)) (kr)^{2m} + c6 ln(r) (kr)^{2m}, checked
    // against the independent evaluation for kr <= 2
    for &(k, r) in &[(1.0, 0.3), (2.0, 0.5), (4.0, 0.5), (0.5, 0.01), (10.0, 0.2)] {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut power = 1.0;
        for m in 0..=60 {
            let c = series_coefficients(m).unwrap();
            let term = (c.c5 + c.c6 * (0.5 * k as f64).ln() + c.c6 * (r as f64).ln()) * power;
            sum += term;
            if m > 0 && term.norm() < 1e-17 * sum.norm() {
                break;
            }
            power *= (k * r) * (k * r);
        }
        let want = hankel1(0, Complex64::new(k * r, 0.0)).unwrap();
        assert!(rel_err(sum, want) < 1e-10, "k={k} r={r}");
    }
}

#[test]
fn c5_uses_harmonic_numbers() {
    // the literal reading 1 + 1/2 + 1/m diverges at m = 0; H_m must be used
    for m in 0..8usize {
        let c = series_coefficients(m).unwrap();
        let h: f64 = (1..=m).map(|l| 1.0 / l as f64).sum();
        let fact: f64 = (1..=m).map(|l| l as f64).product();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let base = sign / (4f64.powi(m as i32) * fact * fact);
        let pi = std::f64::consts::PI;
        assert!((c.c5.re - base).abs() < 1e-16);
        assert!((c.c5.im - base * 2.0 * (EULER_GAMMA - h) / pi).abs() < 1e-16);
    }
}

#[test]
fn exact_integrals_match_quadrature() {
    for m in 0..=10usize {
        let [q7, q8, q9, q10] = common::defining_integrals(m);
        // relative for large m, where the integrals grow like 4^m
        let scale = 1f64.max(q7.abs());
        assert!((int7(m).unwrap() - q7).abs() <= 1e-9 * scale, "int7({m})");
        assert!((int8(m).unwrap() - q8).abs() <= 1e-9 * scale, "int8({m})");
        assert!((int9(m).unwrap() - q9).abs() <= 1e-9 * scale, "int9({m})");
        assert!((int10(m).unwrap() - q10).abs() <= 1e-9 * scale, "int10({m})");
    }
}

#[test]
fn exact_integrals_high_index() {
    // 40-digit mpmath values of the closed forms
    let cases = [(
        10usize,
        18157.16017316017316,
        10895.63224367254168,
        -15130.966810966810967,
        -9205.7849264851748249,
    )];
    for (m, a, b, c, d) in cases {
        assert!((int7(m).unwrap() - a).abs() < 1e-12 * a.abs());
        assert!((int8(m).unwrap() - b).abs() < 1e-12 * b.abs());
        assert!((int9(m).unwrap() - c).abs() < 1e-12 * c.abs());
        assert!((int10(m).unwrap() - d).abs() < 1e-10 * d.abs());
    }
    assert_eq!(int10(0).unwrap().round(), -1.0);
}
