use super::{ElementId, FiniteGroup, GroupError};

impl FiniteGroup {
    /// `C_n`, element `i` is the `i`-th power of a generator.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::UnsupportedSpec("cyclic group of order 0".into()));
        }
        let table = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_table(format!("C{n}"), n, table, Some(labels))
    }

    /// Dihedral group of order `order` (so `dihedral(8)` is the symmetry
    /// group of a square). Elements `0..m` are rotations `r^i`, elements
    /// `m..2m` are reflections `s r^i`, with `r s = s r⁻¹`.
    pub fn dihedral(order: usize) -> Result<Self, GroupError> {
        if order < 2 || !order.is_multiple_of(2) {
            return Err(GroupError::UnsupportedSpec(format!(
                "dihedral group needs an even order ≥ 2, got {order}"
            )));
        }
        let m = order / 2;
        let decode = |x: usize| (x >= m, x % m);
        let encode = |refl: bool, k: usize| if refl { m + k } else { k };
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let (sa, ia) = decode(a);
                let (sb, ib) = decode(b);
                // r^a s = s r^-a
                let k = if sb { (ib + m - ia) % m } else { (ia + ib) % m };
                table.push(encode(sa ^ sb, k));
            }
        }
        let labels = (0..order)
            .map(|x| {
                let (s, k) = decode(x);
                match (s, k) {
                    (false, 0) => "e".to_string(),
                    (false, 1) => "r".to_string(),
                    (false, k) => format!("r{k}"),
                    (true, 0) => "s".to_string(),
                    (true, 1) => "sr".to_string(),
                    (true, k) => format!("sr{k}"),
                }
            })
            .collect();
        Self::from_table(format!("D{order}"), order, table, Some(labels))
    }

    /// `S_n` for `1 ≤ n ≤ 5`. Elements are permutations of `1..=n` in
    /// lexicographic order of their image lists, labelled in cycle notation;
    /// products compose left to right.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if !(1..=5).contains(&n) {
            return Err(GroupError::UnsupportedSpec(format!(
                "symmetric group S_{n} (supported: 1 ≤ n ≤ 5)"
            )));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for a in &perms {
            for b in &perms {
                // i^(ab) = (i^a)^b
                let prod: Vec<usize> = a.iter().map(|&i| b[i]).collect();
                table.push(index(&prod));
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_table(format!("S{n}"), order, table, Some(labels))
    }

    /// The quaternion group `Q_8`, elements ordered `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Result<Self, GroupError> {
        // unit index 0..4 = 1, i, j, k; element = 2 * unit + sign
        const UNIT_MUL: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mut table = Vec::with_capacity(64);
        for a in 0..8 {
            for b in 0..8 {
                let (u, neg) = UNIT_MUL[a / 2][b / 2];
                let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                table.push(2 * u + sign as usize);
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_table("Q8", 8, table, Some(labels))
    }

    /// `A × B`, with `(a, b)` stored at index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table.push(a.mul(xa, ya) * nb + b.mul(xb, yb));
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb)))
            .collect();
        Self::from_table(format!("{}x{}", a.name(), b.name()), n, table, Some(labels))
    }
}

/// All permutations of `0..n` as image lists, sorted lexicographically.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn cycle_notation(perm: &[ElementId]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = perm[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
