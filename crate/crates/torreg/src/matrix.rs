//! Small exact linear algebra: integer Smith normal form with transforms,
//! rational solving and nullspaces, and field-generic rank.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Field, Rat};

pub type IntMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    assert_eq!(inner, b.len());
    let mut out = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn transpose(a: &IntMat) -> IntMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

/// Divide an integer vector by the gcd of its entries, fixing the sign so
/// the first nonzero entry is positive. The zero vector is returned as is.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let mut g = 0i64;
    for &x in v {
        g = g.gcd(&x);
    }
    if g == 0 {
        return v.to_vec();
    }
    let mut out: Vec<i64> = v.iter().map(|&x| x / g).collect();
    if let Some(first) = out.iter().find(|&&x| x != 0) {
        if *first < 0 {
            for x in &mut out {
                *x = -*x;
            }
        }
    }
    out
}

/// Smith normal form: returns `(d, u, v)` with `u * a * v = d`, `u` and `v`
/// unimodular, and `d` diagonal with `d[i][i] | d[i+1][i+1]`.
pub fn smith_normal_form(a: &IntMat) -> (IntMat, IntMat, IntMat) {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    loop {
        diagonalize(&mut d, &mut u, &mut v);
        // fix the divisibility chain by mixing the offending column in and
        // rediagonalizing; terminates because the pivot gcds strictly shrink
        let t = rows.min(cols);
        let bad = (0..t.saturating_sub(1)).find(|&i| {
            d[i][i] != 0 && d[i + 1][i + 1] != 0 && d[i + 1][i + 1] % d[i][i] != 0
        });
        match bad {
            None => break,
            Some(i) => {
                for r in 0..rows {
                    d[r][i] += d[r][i + 1];
                }
                for r in 0..cols {
                    v[r][i] += v[r][i + 1];
                }
            }
        }
    }
    (d, u, v)
}

fn diagonalize(d: &mut IntMat, u: &mut IntMat, v: &mut IntMat) {
    let rows = d.len();
    let cols = if rows > 0 { d[0].len() } else { 0 };
    let mut t = 0usize;
    while t < rows.min(cols) {
        // locate smallest nonzero pivot in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                let q = div_round(d[i][t], d[t][t]);
                if q != 0 {
                    for j in 0..cols {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                if d[i][t] != 0 {
                    // remainder smaller than pivot; swap it up and restart
                    d.swap(t, i);
                    u.swap(t, i);
                    clean = false;
                }
            }
            for j in (t + 1)..cols {
                let q = div_round(d[t][j], d[t][t]);
                if q != 0 {
                    for i in 0..rows {
                        d[i][j] -= q * d[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                }
                if d[t][j] != 0 {
                    for row in d.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if d[t][t] < 0 {
            for j in 0..cols {
                d[t][j] = -d[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
}

fn div_round(a: i64, b: i64) -> i64 {
    // quotient minimizing |a - q b|
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Row-reduce in place, returning the rank. Generic over the field.
pub fn rank<F: Field>(mut m: Vec<Vec<F>>) -> usize {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inv();
        for j in col..cols {
            m[rank][j] = m[rank][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..cols {
                    m[i][j] = m[i][j].clone() - f.clone() * m[rank][j].clone();
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn int_to_rat(m: &IntMat) -> Vec<Vec<Rat>> {
    m.iter()
        .map(|row| row.iter().map(|&x| Rat::from_int(x)).collect())
        .collect()
}

pub fn int_rank(m: &IntMat) -> usize {
    rank::<Rat>(int_to_rat(m))
}

/// Solve `a x = b` over the rationals; `None` when inconsistent. When the
/// system is underdetermined an arbitrary solution (free variables zero) is
/// returned.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = vec![];
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inv();
        for j in col..=cols {
            m[rank][j] = m[rank][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=cols {
                    m[i][j] = m[i][j].clone() - f.clone() * m[rank][j].clone();
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == rows {
            break;
        }
    }
    for i in rank..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, c) in pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Basis of the rational nullspace of `a`.
pub fn nullspace(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut pivots: Vec<usize> = vec![];
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].inv();
        for j in col..cols {
            m[rank][j] = m[rank][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..cols {
                    m[i][j] = m[i][j].clone() - f.clone() * m[rank][j].clone();
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let mut basis = vec![];
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scale a rational vector to a primitive integer vector.
pub fn rat_to_primitive_int(v: &[Rat]) -> Vec<i64> {
    use num_bigint::BigInt;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<i64> = v
        .iter()
        .map(|x| {
            let n = x.numer() * &lcm / x.denom();
            i64::try_from(&n).expect("entry exceeds i64 at desk scale")
        })
        .collect();
    primitive(&ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_of_hirzebruch_rays() {
        // rows are the rays of H_2
        let a = vec![vec![1, 0], vec![0, 1], vec![-1, 2], vec![0, -1]];
        let (d, u, v) = smith_normal_form(&a);
        assert_eq!(mat_mul(&u, &mat_mul(&a, &v)), d);
        assert_eq!(d[0][0], 1);
        assert_eq!(d[1][1], 1);
        assert!(d[2].iter().all(|&x| x == 0));
        assert!(d[3].iter().all(|&x| x == 0));
    }

    #[test]
    fn snf_transforms_unimodular() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let (d, u, v) = smith_normal_form(&a);
        assert_eq!(mat_mul(&u, &mat_mul(&a, &v)), d);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(d[i][j], 0);
                }
            }
        }
        assert!(d[0][0] != 0 && d[1][1] % d[0][0] == 0 && d[2][2] % d[1][1] == 0);
    }

    #[test]
    fn rank_and_solve() {
        let a = int_to_rat(&vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(rank::<Rat>(a.clone()), 1);
        let b = vec![Rat::from_int(3), Rat::from_int(6)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(
            x[0].clone() + Rat::from_int(2) * x[1].clone(),
            Rat::from_int(3)
        );
        let b_bad = vec![Rat::from_int(3), Rat::from_int(7)];
        assert!(solve(&a, &b_bad).is_none());
    }

    #[test]
    fn nullspace_dimension() {
        let a = int_to_rat(&vec![vec![1, 0, -1, 0], vec![0, 1, 2, -1]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let dot: Rat = row
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a.clone() * b.clone())
                    .fold(Rat::from_int(0), |acc, t| acc + t);
                assert!(dot.is_zero());
            }
        }
    }
}
