//! Worst-case linear-time selection (median of medians).

/// Returns the `k`-th smallest value of `v` (0-based), reordering `v`.
/// Values must not be NaN.
pub fn select_kth(v: &mut [f64], k: usize) -> f64 {
    assert!(k < v.len(), "selection index out of range");
    let (mut lo, mut hi, mut k) = (0, v.len(), k);
    loop {
        let s = &mut v[lo..hi];
        if s.len() <= 10 {
            s.sort_by(f64::total_cmp);
            return s[k];
        }
        let pivot = median_of_medians(s);
        let (lt, eq) = partition3(s, pivot);
        if k < lt {
            hi = lo + lt;
        } else if k < lt + eq {
            return pivot;
        } else {
            k -= lt + eq;
            lo += lt + eq;
        }
    }
}

fn median_of_medians(s: &[f64]) -> f64 {
    let mut medians: Vec<f64> = s
        .chunks(5)
        .map(|c| {
            let mut c = c.to_vec();
            c.sort_by(f64::total_cmp);
            c[(c.len() - 1) / 2]
        })
        .collect();
    let k = (medians.len() - 1) / 2;
    select_kth(&mut medians, k)
}

/// Dutch-flag partition; returns `(#less, #equal)`.
fn partition3(s: &mut [f64], pivot: f64) -> (usize, usize) {
    let (mut lt, mut i, mut gt) = (0, 0, s.len());
    while i < gt {
        if s[i] < pivot {
            s.swap(lt, i);
            lt += 1;
            i += 1;
        } else if s[i] > pivot {
            gt -= 1;
            s.swap(i, gt);
        } else {
            i += 1;
        }
    }
    (lt, gt - lt)
}
