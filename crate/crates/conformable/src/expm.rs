//! Dense matrix exponential by scaling-and-squaring with Padé approximants.
//!
//! Degree 3/5/7/9/13 diagonal Padé with the 1-norm thresholds from Higham's
//! analysis; matrices above the top threshold are scaled by a power of two,
//! approximated, and squared back.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
mod theta {
    pub const THETA_3: f64 = 1.495585217958292e-2;
    pub const THETA_5: f64 = 2.539398330063230e-1;
    pub const THETA_7: f64 = 9.504178996162932e-1;
    pub const THETA_9: f64 = 2.097847961257068;
    pub const THETA_13: f64 = 5.371920351148152;
}
use theta::{THETA_13, THETA_3, THETA_5, THETA_7, THETA_9};

pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !a.is_square() {
        return Err(Error::domain("matrix exponential needs a square matrix"));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("matrix exponential needs finite entries"));
    }

    let norm = one_norm(a);
    let (u, v, squarings) = if norm <= THETA_3 {
        let (u, v) = pade3(a);
        (u, v, 0)
    } else if norm <= THETA_5 {
        let (u, v) = pade5(a);
        (u, v, 0)
    } else if norm <= THETA_7 {
        let (u, v) = pade7(a);
        (u, v, 0)
    } else if norm <= THETA_9 {
        let (u, v) = pade9(a);
        (u, v, 0)
    } else {
        let squarings = ((norm / THETA_13).log2().ceil() as i32).max(0);
        let scaled = a * 0.5f64.powi(squarings);
        let (u, v) = pade13(&scaled);
        (u, v, squarings)
    };

    let numer = &v + &u;
    let denom = &v - &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::convergence("Padé denominator is singular"))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn pade3(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    const B: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
    let id = DMatrix::identity(a.nrows(), a.ncols());
    let a2 = a * a;
    let u = a * (&a2 * B[3] + &id * B[1]);
    let v = &a2 * B[2] + &id * B[0];
    (u, v)
}

fn pade5(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    const B: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
    let id = DMatrix::identity(a.nrows(), a.ncols());
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let u = a * (&a4 * B[5] + &a2 * B[3] + &id * B[1]);
    let v = &a4 * B[4] + &a2 * B[2] + &id * B[0];
    (u, v)
}

fn pade7(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    const B: [f64; 8] = [
        17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
    ];
    let id = DMatrix::identity(a.nrows(), a.ncols());
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u = a * (&a6 * B[7] + &a4 * B[5] + &a2 * B[3] + &id * B[1]);
    let v = &a6 * B[6] + &a4 * B[4] + &a2 * B[2] + &id * B[0];
    (u, v)
}

fn pade9(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    const B: [f64; 10] = [
        17643225600.0,
        8821612800.0,
        2075673600.0,
        302702400.0,
        30270240.0,
        2162160.0,
        110880.0,
        3960.0,
        90.0,
        1.0,
    ];
    let id = DMatrix::identity(a.nrows(), a.ncols());
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let a8 = &a6 * &a2;
    let u = a * (&a8 * B[9] + &a6 * B[7] + &a4 * B[5] + &a2 * B[3] + &id * B[1]);
    let v = &a8 * B[8] + &a6 * B[6] + &a4 * B[4] + &a2 * B[2] + &id * B[0];
    (u, v)
}

fn pade13(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let id = DMatrix::identity(a.nrows(), a.ncols());
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_high = &a6 * (&a6 * B[13] + &a4 * B[11] + &a2 * B[9]);
    let u = a * (u_high + &a6 * B[7] + &a4 * B[5] + &a2 * B[3] + &id * B[1]);
    let v_high = &a6 * (&a6 * B[12] + &a4 * B[10] + &a2 * B[8]);
    let v = v_high + &a6 * B[6] + &a4 * B[4] + &a2 * B[2] + &id * B[0];
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() <= tol * (1.0 + y.abs()), "{x} vs {y}");
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = DMatrix::zeros(3, 3);
        close(&expm(&z).unwrap(), &DMatrix::identity(3, 3), 1e-15);
    }

    #[test]
    fn diagonal_case() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -2.0, 0.5]));
        let e = expm(&a).unwrap();
        let expect = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1f64.exp(),
            (-2f64).exp(),
            0.5f64.exp(),
        ]));
        close(&e, &expect, 1e-14);
    }

    #[test]
    fn nilpotent_case() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let e = expm(&a).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        close(&e, &expect, 1e-15);
    }

    #[test]
    fn rotation_generator() {
        let th = 1.2;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -th, th, 0.0]);
        let e = expm(&a).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        close(&e, &expect, 1e-14);
    }

    #[test]
    fn large_norm_goes_through_squaring() {
        let a = DMatrix::from_row_slice(2, 2, &[8.0, 1.0, 0.0, 8.0]);
        // exp([[8,1],[0,8]]) = e^8 [[1,1],[0,1]]
        let e = expm(&a).unwrap();
        let s = 8f64.exp();
        let expect = DMatrix::from_row_slice(2, 2, &[s, s, 0.0, s]);
        close(&e, &expect, 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 2.0]);
        assert!(expm(&a).is_err());
        let b = DMatrix::from_row_slice(1, 1, &[f64::NAN]);
        assert!(expm(&b).is_err());
    }
}
