use std::collections::BTreeSet;

use lietp_core::group::GroupElement;

/// Left-aligned columns separated by two spaces.
pub fn render(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (k, (c, w)) in cells.iter().zip(&width).enumerate() {
            if k + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  "));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Interior ranks keyed by degree: one row for rank 1, a matrix for rank 2
/// (rows: first coordinate), a list otherwise.
pub fn rank_grid(cells: &[(Option<GroupElement>, usize)]) -> String {
    let rank = cells.iter().find_map(|(g, _)| g.as_ref().map(|g| g.rank()));
    match rank {
        None => cells.iter().map(|(_, r)| format!("mixed-degree interior rank: {r}\n")).collect(),
        Some(1) => {
            let header: Vec<String> =
                std::iter::once("degree".to_string()).chain(cells.iter().map(|(g, _)| coord(g, 0))).collect();
            let row: Vec<String> =
                std::iter::once("rank".to_string()).chain(cells.iter().map(|(_, r)| r.to_string())).collect();
            let h: Vec<&str> = header.iter().map(String::as_str).collect();
            render(&h, &[row])
        }
        Some(2) => {
            let xs: BTreeSet<i64> = cells.iter().filter_map(|(g, _)| g.as_ref().map(|g| g.coords()[0])).collect();
            let ys: BTreeSet<i64> = cells.iter().filter_map(|(g, _)| g.as_ref().map(|g| g.coords()[1])).collect();
            let header: Vec<String> =
                std::iter::once("d1\\d2".to_string()).chain(ys.iter().map(|y| y.to_string())).collect();
            let rows: Vec<Vec<String>> = xs
                .iter()
                .map(|&x| {
                    std::iter::once(x.to_string())
                        .chain(ys.iter().map(|&y| {
                            cells
                                .iter()
                                .find(|(g, _)| g.as_ref().is_some_and(|g| g.coords() == [x, y]))
                                .map_or(".".to_string(), |(_, r)| r.to_string())
                        }))
                        .collect()
                })
                .collect();
            let h: Vec<&str> = header.iter().map(String::as_str).collect();
            render(&h, &rows)
        }
        Some(_) => {
            let rows: Vec<Vec<String>> = cells
                .iter()
                .map(|(g, r)| vec![g.as_ref().map_or("mixed".into(), |g| g.to_string()), r.to_string()])
                .collect();
            render(&["degree", "rank"], &rows)
        }
    }
}

fn coord(g: &Option<GroupElement>, k: usize) -> String {
    g.as_ref().map_or("?".into(), |g| g.coords()[k].to_string())
}
