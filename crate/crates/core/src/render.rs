//! Plain-text drawing of an allocation on the value line.
//!
//! Houses are plotted at their values along a fixed-width axis; each edge
//! becomes a bar spanning the two values it connects, so the drawn length
//! of the bar is that edge's envy.

use std::fmt::Write;

use crate::allocation::Allocation;
use crate::envy::{edge_envy, total_envy};
use crate::error::Result;
use crate::graph::Graph;
use crate::profile::ValueProfile;

const WIDTH: usize = 60;

fn column(x: f64, lo: f64, hi: f64) -> usize {
    if hi <= lo {
        return 0;
    }
    (((x - lo) / (hi - lo)) * (WIDTH - 1) as f64).round() as usize
}

/// Renders the allocation; every number printed is exact except the bar
/// positions.
pub fn render_text(graph: &Graph, profile: &ValueProfile, alloc: &Allocation) -> Result<String> {
    let total = total_envy(alloc, graph, profile)?;
    let mut out = String::new();
    let (lo, hi) = match (profile.min(), profile.max()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => {
            writeln!(out, "empty instance, total envy 0").unwrap();
            return Ok(out);
        }
    };
    let (lof, hif) = (lo.to_f64(), hi.to_f64());
    writeln!(out, "value interval [{lo}, {hi}]").unwrap();

    let mut axis = vec!['-'; WIDTH];
    let owners = alloc.owners();
    for rank in 0..profile.len() {
        axis[column(profile.at_rank(rank).to_f64(), lof, hif)] = 'o';
    }
    writeln!(out, "       {}", axis.iter().collect::<String>()).unwrap();
    for rank in 0..profile.len() {
        let house = profile.house_at(rank);
        let col = column(profile.at_rank(rank).to_f64(), lof, hif);
        writeln!(
            out,
            "       {:col$}^ house {house} = {} -> agent {}",
            "",
            profile.value(house),
            owners[house]
        )
        .unwrap();
    }

    writeln!(out, "edges:").unwrap();
    for &(u, v) in graph.edges() {
        let (a, b) = (profile.value(alloc.house(u)), profile.value(alloc.house(v)));
        let (ca, cb) = (column(a.to_f64(), lof, hif), column(b.to_f64(), lof, hif));
        let (from, to) = (ca.min(cb), ca.max(cb));
        let mut bar = vec![' '; WIDTH];
        for c in bar.iter_mut().take(to + 1).skip(from) {
            *c = '=';
        }
        bar[from] = '|';
        bar[to] = '|';
        writeln!(
            out,
            "{:>6} {} envy {}",
            format!("{u}-{v}"),
            bar.iter().collect::<String>(),
            edge_envy(alloc, (u, v), profile)?
        )
        .unwrap();
    }
    writeln!(out, "total envy {total} ({})", total.to_decimal_string(6)).unwrap();
    Ok(out)
}
