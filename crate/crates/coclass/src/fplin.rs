//! Small dense linear algebra over the prime field F_p.
//!
//! Vectors are exponent vectors `Vec<u8>` with entries in `0..p`. The sizes
//! here are tiny (dimensions below ~100), so everything is straightforward
//! row reduction without any sparsity tricks.

/// Multiplicative inverse mod p for 0 < a < p.
pub fn inv_mod(a: u8, p: u8) -> u8 {
    // Fermat: a^(p-2) mod p. p is a small prime.
    let mut acc: u32 = 1;
    let mut base: u32 = a as u32 % p as u32;
    let mut e = p as u32 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u32;
        }
        base = base * base % p as u32;
        e >>= 1;
    }
    acc as u8
}

/// v += c * w (componentwise, mod p).
pub fn add_scaled(v: &mut [u8], w: &[u8], c: u8, p: u8) {
    for (a, b) in v.iter_mut().zip(w.iter()) {
        *a = ((*a as u32 + c as u32 * *b as u32) % p as u32) as u8;
    }
}

pub fn is_zero(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Index of the first nonzero coordinate, if any.
pub fn lead(v: &[u8]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// Row-echelon span of F_p vectors with unit pivots, kept sorted by pivot column.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub p: u8,
    pub width: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u8, width: usize) -> Self {
        Echelon { p, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce v against the span; the remainder has zero entries at all pivots.
    pub fn reduce(&self, mut v: Vec<u8>) -> Vec<u8> {
        for (row, &piv) in self.rows.iter().zip(self.pivots.iter()) {
            let c = v[piv];
            if c != 0 {
                add_scaled(&mut v, row, self.p - c, self.p);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        is_zero(&self.reduce(v.to_vec()))
    }

    /// Insert v into the span. Returns true when the rank grew.
    pub fn insert(&mut self, v: Vec<u8>) -> bool {
        let mut r = self.reduce(v);
        match lead(&r) {
            None => false,
            Some(piv) => {
                let c = inv_mod(r[piv], self.p);
                for x in r.iter_mut() {
                    *x = (*x as u32 * c as u32 % self.p as u32) as u8;
                }
                let pos = self.pivots.partition_point(|&q| q < piv);
                self.rows.insert(pos, r);
                self.pivots.insert(pos, piv);
                true
            }
        }
    }

    /// Basis in fully reduced echelon form, entries above every pivot cleared.
    /// Two spans are equal exactly when these rows agree, so the result is a
    /// canonical encoding of the subspace.
    pub fn reduced_rows(&self) -> Vec<Vec<u8>> {
        let mut out = self.rows.clone();
        for k in (0..out.len()).rev() {
            let piv = self.pivots[k];
            let (head, tail) = out.split_at_mut(k);
            for e in head.iter_mut() {
                let c = e[piv];
                if c != 0 {
                    add_scaled(e, &tail[0], self.p - c, self.p);
                }
            }
        }
        out
    }
}

/// All subspaces of F_p^width of the given dimension, as reduced row-echelon
/// bases. Enumeration order is deterministic: by pivot-column set, then by
/// free entries in odometer order.
pub fn subspaces(p: u8, width: usize, dim: usize) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    if dim > width {
        return out;
    }
    if dim == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut pivots = (0..dim).collect::<Vec<usize>>();
    loop {
        // Free positions: (row r, col j) with j > pivots[r] and j not a pivot.
        let mut free = Vec::new();
        for r in 0..dim {
            for j in pivots[r] + 1..width {
                if !pivots.contains(&j) {
                    free.push((r, j));
                }
            }
        }
        let mut vals = vec![0u8; free.len()];
        loop {
            let mut basis = vec![vec![0u8; width]; dim];
            for r in 0..dim {
                basis[r][pivots[r]] = 1;
            }
            for (k, &(r, j)) in free.iter().enumerate() {
                basis[r][j] = vals[k];
            }
            out.push(basis);
            // odometer step
            let mut k = 0;
            loop {
                if k == vals.len() {
                    break;
                }
                vals[k] += 1;
                if vals[k] < p {
                    break;
                }
                vals[k] = 0;
                k += 1;
            }
            if k == vals.len() {
                break;
            }
        }
        // next pivot combination in lexicographic order; pivots[i] <= width-dim+i
        let mut advanced = false;
        for i in (0..dim).rev() {
            if pivots[i] < width - dim + i {
                pivots[i] += 1;
                for j in i + 1..dim {
                    pivots[j] = pivots[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_3_and_7() {
        assert_eq!(inv_mod(1, 3), 1);
        assert_eq!(inv_mod(2, 3), 2);
        for a in 1..7 {
            assert_eq!(a as u32 * inv_mod(a, 7) as u32 % 7, 1);
        }
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new(3, 4);
        assert!(e.insert(vec![0, 1, 2, 0]));
        assert!(e.insert(vec![1, 0, 0, 2]));
        assert!(!e.insert(vec![2, 2, 1, 1])); // 2*row1 + 2*row0
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[2, 2, 1, 1]));
        assert!(!e.contains(&[0, 0, 1, 0]));
    }

    #[test]
    fn invert_round_trips() {
        let p = 3;
        for m in [
            vec![vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 2, 1]],
        ] {
            let inv = invert(p, &m).unwrap();
            for i in 0..3 {
                let col: Vec<u8> = (0..3).map(|r| m[r][i]).collect();
                let mut e = vec![0u8; 3];
                e[i] = 1;
                // inv * (i-th column of m) = e_i
                assert_eq!(mat_vec(p, &inv, &col), e);
            }
        }
        // rows satisfy r0 + r1 = r2, so no inverse exists
        let singular = vec![vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert!(invert(p, &singular).is_none());
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // Subspace counts of F_3^4: dim 1 -> 40, dim 2 -> 130, dim 3 -> 40.
        assert_eq!(subspaces(3, 4, 1).len(), 40);
        assert_eq!(subspaces(3, 4, 2).len(), 130);
        assert_eq!(subspaces(3, 4, 3).len(), 40);
        assert_eq!(subspaces(3, 4, 4).len(), 1);
        assert_eq!(subspaces(3, 4, 0).len(), 1);
    }

    #[test]
    fn subspaces_are_distinct_echelon_bases() {
        let all = subspaces(3, 3, 2);
        assert_eq!(all.len(), 13);
        for basis in &all {
            let mut e = Echelon::new(3, 3);
            for row in basis {
                assert!(e.insert(row.clone()));
            }
            assert_eq!(e.rank(), 2);
        }
    }

    fn brute_solutions(p: u8, width: usize, rows: &[(Vec<u8>, u8)]) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut x = vec![0u8; width];
        loop {
            if rows.iter().all(|(a, b)| {
                let s: u32 = a.iter().zip(&x).map(|(&c, &v)| c as u32 * v as u32).sum();
                s % p as u32 == *b as u32
            }) {
                out.push(x.clone());
            }
            let mut pos = 0;
            loop {
                if pos == width {
                    return out;
                }
                x[pos] += 1;
                if x[pos] < p {
                    break;
                }
                x[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn affine_solver_matches_brute_force() {
        let cases: Vec<(usize, Vec<(Vec<u8>, u8)>)> = vec![
            (2, vec![(vec![1, 2], 1)]),
            (2, vec![(vec![1, 2], 1), (vec![2, 1], 0)]),
            (2, vec![(vec![1, 1], 1), (vec![2, 2], 1)]),
            (3, vec![(vec![1, 0, 2], 2), (vec![0, 1, 1], 0)]),
            (3, vec![(vec![0, 0, 0], 0)]),
            (3, vec![(vec![0, 0, 0], 1)]),
            (4, vec![(vec![1, 2, 0, 1], 2), (vec![0, 1, 1, 0], 1), (vec![1, 0, 2, 1], 1)]),
            (3, vec![]),
        ];
        for (width, rows) in cases {
            let mut got = solve_affine(3, width, &rows);
            let mut want = brute_solutions(3, width, &rows);
            got.sort();
            want.sort();
            assert_eq!(got, want, "width {width} rows {rows:?}");
        }
    }

    #[test]
    fn affine_solver_order_is_deterministic() {
        let rows = vec![(vec![1u8, 1, 0], 0u8)];
        let a = solve_affine(3, 3, &rows);
        let b = solve_affine(3, 3, &rows);
        assert_eq!(a, b);
        assert_eq!(a.len(), 9);
    }
}

/// Inverse of a square matrix given as rows, via Gauss-Jordan elimination.
pub fn invert(p: u8, m: &[Vec<u8>]) -> Option<Vec<Vec<u8>>> {
    let d = m.len();
    let mut a: Vec<Vec<u8>> = m.to_vec();
    let mut inv: Vec<Vec<u8>> = (0..d)
        .map(|i| (0..d).map(|j| u8::from(i == j)).collect())
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let c = inv_mod(a[col][col], p);
        for j in 0..d {
            a[col][j] = (a[col][j] as u32 * c as u32 % p as u32) as u8;
            inv[col][j] = (inv[col][j] as u32 * c as u32 % p as u32) as u8;
        }
        for r in 0..d {
            if r != col && a[r][col] != 0 {
                let f = p - a[r][col];
                let arow = a[col].clone();
                let irow = inv[col].clone();
                add_scaled(&mut a[r], &arow, f, p);
                add_scaled(&mut inv[r], &irow, f, p);
            }
        }
    }
    Some(inv)
}

/// Matrix-vector product over F_p.
/// Row vector times matrix, the matrix given by rows.
pub fn vec_mat(p: u8, v: &[u8], m: &[Vec<u8>]) -> Vec<u8> {
    let width = m.first().map_or(0, Vec::len);
    let mut out = vec![0u8; width];
    for (a, &c) in v.iter().enumerate() {
        if c != 0 {
            add_scaled(&mut out, &m[a], c, p);
        }
    }
    out
}

pub fn mat_vec(p: u8, m: &[Vec<u8>], v: &[u8]) -> Vec<u8> {
    m.iter()
        .map(|row| {
            let mut acc = 0u32;
            for (a, b) in row.iter().zip(v.iter()) {
                acc += *a as u32 * *b as u32;
            }
            (acc % p as u32) as u8
        })
        .collect()
}

/// Every solution of the affine system a.x = b over F_p, rows given as
/// (coefficients, right-hand side). An empty or all-zero system yields the
/// whole space. Order is deterministic: free coordinates run in odometer
/// order, lowest index fastest.
pub fn solve_affine(p: u8, width: usize, rows: &[(Vec<u8>, u8)]) -> Vec<Vec<u8>> {
    let mut ech = Echelon::new(p, width + 1);
    for (a, b) in rows {
        let mut v = a.clone();
        v.push(*b);
        ech.insert(v);
    }
    if ech.pivots().contains(&width) {
        return Vec::new();
    }
    let mut is_pivot = vec![false; width];
    for &c in ech.pivots() {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..width).filter(|&c| !is_pivot[c]).collect();
    let mut out = Vec::new();
    let mut digits = vec![0u8; free.len()];
    loop {
        let mut x = vec![0u8; width];
        for (k, &c) in free.iter().enumerate() {
            x[c] = digits[k];
        }
        // rows are zero before their pivot, so substitute from the last up
        for (row, &piv) in ech.rows().iter().zip(ech.pivots()).rev() {
            let mut acc = row[width] as i32;
            for c in piv + 1..width {
                if row[c] != 0 {
                    acc -= row[c] as i32 * x[c] as i32;
                }
            }
            x[piv] = acc.rem_euclid(p as i32) as u8;
        }
        out.push(x);
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return out;
            }
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}
