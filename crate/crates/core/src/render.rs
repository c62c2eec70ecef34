//! Hasse diagrams as DOT text and as standalone SVG.

use std::fmt::Write;

use crate::lattice::FinLattice;
use crate::poset::Poset;

/// Labels, covering pairs `(lo, hi)` and a level for each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hasse {
    pub labels: Vec<String>,
    pub covers: Vec<(usize, usize)>,
    pub levels: Vec<usize>,
}

impl Hasse {
    pub fn of_lattice(l: &FinLattice) -> Self {
        Hasse {
            labels: l.labels().to_vec(),
            covers: l.cover_pairs(),
            levels: l.heights(),
        }
    }

    pub fn of_poset(p: &Poset) -> Self {
        let covers = p.cover_pairs();
        let n = p.len();
        let mut levels = vec![0; n];
        // longest chain below; covers only go upward, so n rounds suffice
        for _ in 0..n {
            for &(lo, hi) in &covers {
                levels[hi] = levels[hi].max(levels[lo] + 1);
            }
        }
        Hasse {
            labels: p.labels().to_vec(),
            covers,
            levels,
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        writeln!(s, "digraph \"{}\" {{", escape(name)).unwrap();
        writeln!(s, "  rankdir=BT;").unwrap();
        writeln!(s, "  node [shape=circle, fontsize=10];").unwrap();
        for (i, label) in self.labels.iter().enumerate() {
            writeln!(s, "  n{i} [label=\"{}\"];", escape(label)).unwrap();
        }
        for &(lo, hi) in &self.covers {
            writeln!(s, "  n{lo} -> n{hi} [arrowhead=none];").unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// Element positions: rows by level, each row ordered by the mean
    /// position of lower covers, ties by index.
    fn layout(&self) -> Vec<(f64, f64)> {
        let n = self.labels.len();
        let top = self.levels.iter().copied().max().unwrap_or(0);
        let mut slot = vec![0.0f64; n];
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        for (i, &lv) in self.levels.iter().enumerate() {
            rows[lv].push(i);
        }
        for row in &mut rows {
            let key = |x: usize| {
                let below: Vec<f64> =
                    self.covers.iter().filter(|c| c.1 == x).map(|c| slot[c.0]).collect();
                if below.is_empty() {
                    0.0
                } else {
                    below.iter().sum::<f64>() / below.len() as f64
                }
            };
            let mut keyed: Vec<(f64, usize)> = row.iter().map(|&x| (key(x), x)).collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let width = keyed.len() as f64;
            for (k, &(_, x)) in keyed.iter().enumerate() {
                slot[x] = k as f64 - (width - 1.0) / 2.0;
            }
            *row = keyed.into_iter().map(|(_, x)| x).collect();
        }
        (0..n)
            .map(|i| (slot[i], (top - self.levels[i]) as f64))
            .collect()
    }

    pub fn to_svg(&self) -> String {
        const DX: f64 = 70.0;
        const DY: f64 = 60.0;
        const R: f64 = 14.0;
        let pos = self.layout();
        let max_w = pos.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
        let max_h = pos.iter().map(|p| p.1).fold(0.0, f64::max);
        let width = 2.0 * max_w * DX + 4.0 * DX;
        let height = max_h * DY + 2.0 * DY;
        let at = |i: usize| (width / 2.0 + pos[i].0 * DX, DY + pos[i].1 * DY);
        let mut s = String::new();
        writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
        )
        .unwrap();
        s.push_str("<g stroke=\"#444\" stroke-width=\"1.5\">\n");
        for &(lo, hi) in &self.covers {
            let ((x1, y1), (x2, y2)) = (at(lo), at(hi));
            writeln!(s, "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\"/>").unwrap();
        }
        s.push_str("</g>\n<g font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">\n");
        for (i, label) in self.labels.iter().enumerate() {
            let (x, y) = at(i);
            writeln!(
                s,
                "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{R}\" fill=\"#fff\" stroke=\"#222\"><title>{}</title></circle>",
                escape_xml(label)
            )
            .unwrap();
            writeln!(
                s,
                "<text x=\"{x:.1}\" y=\"{:.1}\">{}</text>",
                y - R - 4.0,
                escape_xml(label)
            )
            .unwrap();
        }
        s.push_str("</g>\n</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
