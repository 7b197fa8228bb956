//! DOT export of the eggbox diagram: one box per J-class laid out as an
//! R-class x L-class grid whose cells are H-classes, with edges for the
//! covering pairs of the J-order (each class points at the classes covering
//! it, so the identity's class renders at the top, a zero's at the bottom).

use super::{FiniteMonoid, GreenData};

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub(super) fn to_dot(m: &FiniteMonoid) -> String {
    let g = GreenData::new(m);
    let n = m.size();

    // J-classes, indexed by representative discovery order
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for u in 0..n {
        if class_of[u] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let members: Vec<usize> = (u..n).filter(|&v| g.sim_j(u, v)).collect();
        for &v in &members {
            class_of[v] = id;
        }
        classes.push(members);
    }

    let mut out = String::from("digraph eggbox {\n  rankdir=TB;\n  node [shape=plaintext];\n");
    for (id, members) in classes.iter().enumerate() {
        // rows: R-classes, columns: L-classes (representatives in member order)
        let mut r_reps: Vec<usize> = Vec::new();
        let mut l_reps: Vec<usize> = Vec::new();
        for &v in members {
            if !r_reps.iter().any(|&r| g.sim_r(r, v)) {
                r_reps.push(v);
            }
            if !l_reps.iter().any(|&l| g.sim_l(l, v)) {
                l_reps.push(v);
            }
        }
        let mut label = String::from("<TABLE BORDER=\"0\" CELLBORDER=\"1\" CELLSPACING=\"0\">");
        for &r in &r_reps {
            label.push_str("<TR>");
            for &l in &l_reps {
                let cell: Vec<&str> = members
                    .iter()
                    .filter(|&&v| g.sim_r(r, v) && g.sim_l(l, v))
                    .map(|&v| m.name(v))
                    .collect();
                let text = if cell.is_empty() { "·".to_string() } else { escape(&cell.join(" ")) };
                label.push_str(&format!("<TD>{text}</TD>"));
            }
            label.push_str("</TR>");
        }
        label.push_str("</TABLE>");
        out.push_str(&format!("  j{id} [label=<{label}>];\n"));
    }

    // covering edges of the strict J-order, drawn from each class to the
    // classes immediately above it (the identity's class is the minimum)
    let strictly_below = |lo: usize, hi: usize| -> bool {
        let (l, h) = (classes[lo][0], classes[hi][0]);
        g.leq_j[l][h] && !g.leq_j[h][l]
    };
    for lo in 0..classes.len() {
        for hi in 0..classes.len() {
            if !strictly_below(lo, hi) {
                continue;
            }
            let covered = (0..classes.len()).any(|mid| strictly_below(lo, mid) && strictly_below(mid, hi));
            if !covered {
                out.push_str(&format!("  j{lo} -> j{hi};\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}
