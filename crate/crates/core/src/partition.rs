//! Set partitions, enumerated through restricted growth strings.

/// Restricted growth strings of length `n` in lexicographic order:
/// `a[0] = 0` and `a[i] <= 1 + max(a[..i])`.
pub fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut a = vec![0usize; n];
    let mut m = vec![0usize; n];
    loop {
        out.push(a.clone());
        // rightmost position that can still be incremented
        let mut i = n - 1;
        while i > 0 && a[i] > m[i - 1] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        a[i] += 1;
        m[i] = m[i - 1].max(a[i]);
        for j in i + 1..n {
            a[j] = 0;
            m[j] = m[i];
        }
    }
}

/// All partitions of the set bits of `mask` into nonempty blocks, each block
/// a bitmask. Blocks appear in order of their lowest element.
pub fn mask_partitions(mask: u32) -> Vec<Vec<u32>> {
    let bits: Vec<u32> = (0..32).filter(|i| mask & (1 << i) != 0).collect();
    restricted_growth_strings(bits.len())
        .into_iter()
        .map(|rgs| {
            let k = rgs.iter().max().map_or(0, |m| m + 1);
            let mut blocks = vec![0u32; k];
            for (b, &label) in bits.iter().zip(&rgs) {
                blocks[label] |= 1 << b;
            }
            blocks
        })
        .collect()
}

/// Bell numbers `B_0..=B_max` from the Bell triangle.
pub fn bell_numbers(max: usize) -> Vec<u64> {
    let mut out = vec![1u64];
    let mut row = vec![1u64];
    for _ in 0..max {
        let mut next = vec![*row.last().expect("nonempty")];
        for v in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + v);
        }
        out.push(next[0]);
        row = next;
    }
    out.truncate(max + 1);
    out
}
