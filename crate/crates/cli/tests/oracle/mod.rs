//! Brute-force reference implementations of the metrics. These count
//! n-grams by linear scans rather than hash maps and share no code with the
//! library.

fn count_at<T: PartialEq>(items: &[T], gram: &[T]) -> u64 {
    let n = gram.len();
    if items.len() < n {
        return 0;
    }
    (0..=items.len() - n)
        .filter(|&i| &items[i..i + n] == gram)
        .count() as u64
}

/// (hypothesis n-gram count, reference n-gram count, clipped matches)
fn order_stats<T: PartialEq>(hyp: &[T], reference: &[T], n: usize) -> (u64, u64, u64) {
    let windows = |items: &[T]| {
        if items.len() >= n {
            items.len() - n + 1
        } else {
            0
        }
    };
    let mut matches = 0;
    for i in 0..windows(hyp) {
        let gram = &hyp[i..i + n];
        let seen_before = (0..i).any(|j| &hyp[j..j + n] == gram);
        if !seen_before {
            matches += count_at(hyp, gram).min(count_at(reference, gram));
        }
    }
    (windows(hyp) as u64, windows(reference) as u64, matches)
}

pub fn bleu(hyps: &[Vec<String>], refs: &[Vec<String>]) -> f64 {
    let mut matches = [0u64; 4];
    let mut totals = [0u64; 4];
    let (mut hyp_len, mut ref_len) = (0u64, 0u64);
    for (h, r) in hyps.iter().zip(refs) {
        hyp_len += h.len() as u64;
        ref_len += r.len() as u64;
        for n in 1..=4 {
            let (total, _, m) = order_stats(h, r, n);
            totals[n - 1] += total;
            matches[n - 1] += m;
        }
    }
    if hyp_len == 0 && ref_len == 0 {
        return 100.0;
    }
    if matches == [0; 4] {
        return 0.0;
    }
    let mut order = 0;
    while order < 4 && totals[order] > 0 {
        order += 1;
    }
    let mut log_precision = 0.0;
    let mut smoothing = 1.0;
    for n in 0..order {
        let p = if matches[n] == 0 {
            smoothing *= 2.0;
            1.0 / (smoothing * totals[n] as f64)
        } else {
            matches[n] as f64 / totals[n] as f64
        };
        log_precision += p.ln() / order as f64;
    }
    let bp = if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };
    100.0 * bp * log_precision.exp()
}

pub fn chrf(
    hyps: &[String],
    refs: &[String],
    beta: f64,
    char_order: usize,
    word_order: usize,
) -> f64 {
    let orders = char_order + word_order;
    let mut stats = vec![(0u64, 0u64, 0u64); orders];
    for (h, r) in hyps.iter().zip(refs) {
        let hc: Vec<char> = h.chars().filter(|c| !c.is_whitespace()).collect();
        let rc: Vec<char> = r.chars().filter(|c| !c.is_whitespace()).collect();
        let hw: Vec<&str> = h.split_whitespace().collect();
        let rw: Vec<&str> = r.split_whitespace().collect();
        for (k, slot) in stats.iter_mut().enumerate() {
            let (a, b, m) = if k < char_order {
                order_stats(&hc, &rc, k + 1)
            } else {
                order_stats(&hw, &rw, k - char_order + 1)
            };
            slot.0 += a;
            slot.1 += b;
            slot.2 += m;
        }
    }
    let active: Vec<_> = stats.into_iter().filter(|s| s.0 > 0 || s.1 > 0).collect();
    if active.is_empty() {
        return 100.0;
    }
    let mut p = 0.0;
    let mut r = 0.0;
    for (h, rf, m) in &active {
        p += if *h > 0 { *m as f64 / *h as f64 } else { 0.0 };
        r += if *rf > 0 { *m as f64 / *rf as f64 } else { 0.0 };
    }
    p /= active.len() as f64;
    r /= active.len() as f64;
    let b2 = beta * beta;
    if b2 * p + r == 0.0 {
        0.0
    } else {
        100.0 * (1.0 + b2) * p * r / (b2 * p + r)
    }
}

pub fn mae(predicted: &[i64], gold: &[i64]) -> f64 {
    let mut p = predicted.to_vec();
    let mut g = gold.to_vec();
    while p.len() < g.len() {
        p.push(0);
    }
    while g.len() < p.len() {
        g.push(0);
    }
    if p.is_empty() {
        return 0.0;
    }
    let mut sum = 0;
    for i in 0..p.len() {
        sum += (p[i] - g[i]).abs();
    }
    sum as f64 / p.len() as f64
}

pub fn topn(lists: &[Vec<String>], refs: &[String], n: usize) -> f64 {
    let mut hits = 0;
    for (list, reference) in lists.iter().zip(refs) {
        let upto = n.min(list.len());
        if list[..upto].iter().any(|c| c == reference) {
            hits += 1;
        }
    }
    hits as f64 / lists.len() as f64
}
