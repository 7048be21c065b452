//! Subset and injection enumeration helpers.

/// `C(n, k)` as u64.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// `n! / (n-k)!`, the number of injections from a `k`-set into an `n`-set.
pub fn falling_factorial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64)
}

/// Calls `f` on every `k`-subset of `items` in lexicographic index order.
pub fn for_each_combination<T: Copy>(items: &[T], k: usize, mut f: impl FnMut(&[T])) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = items[idx[j]];
        }
    }
}

/// Calls `f` on every injective sequence of length `k` drawn from `0..n`.
pub fn for_each_injection(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn go(n: usize, k: usize, used: &mut Vec<bool>, seq: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if seq.len() == k {
            f(seq);
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                seq.push(v);
                go(n, k, used, seq, f);
                seq.pop();
                used[v] = false;
            }
        }
    }
    if k > n {
        return;
    }
    go(n, k, &mut vec![false; n], &mut Vec::with_capacity(k), &mut f);
}
