//! Human-readable summaries for the `describe` and `topologies` commands.

use std::fmt::Write as _;

use crate::ideals::{enumerate_ideals, format_set, order_topology, spec, zariski_topology, Spectrum, TopologySpace};
use crate::monoid::FiniteCommMonoid;
use crate::poset::FinitePoset;
use crate::scheme::sections::centre;
use crate::scheme::MonoidScheme;
use crate::topology::Site;

/// Covering pairs `(x, y)` with `x < y` and nothing strictly between.
pub fn hasse_edges(order: &FinitePoset) -> Vec<(usize, usize)> {
    let n = order.size();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y || !order.leq(x, y) {
                continue;
            }
            let between = (0..n).any(|z| z != x && z != y && order.leq(x, z) && order.leq(z, y));
            if !between {
                out.push((x, y));
            }
        }
    }
    out
}

fn write_opens(out: &mut String, label: &str, m: &FiniteCommMonoid, sp: &Spectrum, t: &TopologySpace) {
    let _ = writeln!(out, "{label} opens ({}):", t.opens().len());
    for &u in t.opens() {
        let _ = writeln!(out, "  {}", crate::ideals::format_points(sp, m, u));
    }
}

pub fn describe_monoid(m: &FiniteCommMonoid) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "monoid {} ({} elements): {}", m.name(), m.size(), m.element_names().join(" "));
    let ideals = enumerate_ideals(m);
    let _ = writeln!(out, "ideals ({}):", ideals.len());
    for &a in &ideals {
        let _ = writeln!(out, "  {}", format_set(m, a));
    }
    let sp = spec(m);
    let _ = writeln!(out, "primes ({}):", sp.size());
    for p in 0..sp.size() {
        let _ = writeln!(out, "  p{p} = {}", format_set(m, sp.prime(p)));
    }
    let edges: Vec<String> = hasse_edges(sp.order()).iter().map(|(x, y)| format!("p{x} < p{y}")).collect();
    let _ = writeln!(out, "inclusions: {}", if edges.is_empty() { "none".to_string() } else { edges.join(", ") });
    write_opens(&mut out, "zariski", m, &sp, &zariski_topology(m, &sp));
    write_opens(&mut out, "order", m, &sp, &order_topology(&sp));
    out.push_str(&describe_topologies(m));
    out
}

/// Each topology with the set of points it corresponds to.
pub fn describe_topologies(m: &FiniteCommMonoid) -> String {
    let site = Site::new(m);
    let tops = site.enumerate_topologies();
    let mut out = String::new();
    let _ = writeln!(out, "topologies ({}):", tops.len());
    for f in &tops {
        let pts = site.xi(f);
        let back = if site.upsilon(pts) == *f { "" } else { " (not recovered)" };
        let _ = writeln!(out, "  {} <-> {}{back}", site.format_family(f), site.format_points(pts));
    }
    out
}

pub fn describe_scheme(x: &MonoidScheme) -> String {
    let mut out = String::new();
    let names: Vec<&str> = x.charts().iter().map(|c| c.name()).collect();
    let _ = writeln!(out, "scheme {} (charts: {})", x.name(), names.join(", "));
    let _ = writeln!(out, "points ({}):", x.point_count());
    for p in 0..x.point_count() {
        let _ = writeln!(out, "  x{p} = {}", x.format_point(p));
    }
    let edges: Vec<String> = hasse_edges(x.order()).iter().map(|(a, b)| format!("x{a} < x{b}")).collect();
    let _ = writeln!(out, "generizations: {}", if edges.is_empty() { "none".to_string() } else { edges.join(", ") });
    let _ = writeln!(out, "opens ({}):", x.opens().len());
    for &u in x.opens() {
        let pts: Vec<String> = u.iter().map(|p| format!("x{p}")).collect();
        let _ = writeln!(out, "  {{{}}}", pts.join(", "));
    }
    let z = centre(x);
    let _ = writeln!(out, "centre ({} elements):", z.size());
    for row in z.rows() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scheme::build_scheme;

    #[test]
    fn b_has_three_ideals_two_primes_three_topologies() {
        let text = describe_monoid(&corpus::b());
        assert!(text.contains("ideals (3):"), "{text}");
        assert!(text.contains("primes (2):"));
        assert!(text.contains("topologies (3):"));
        assert!(!text.contains("not recovered"));
    }

    #[test]
    fn x2_has_four_points_and_five_sections() {
        let text = describe_scheme(&build_scheme(&corpus::x2()).unwrap());
        assert!(text.contains("points (4):"), "{text}");
        assert!(text.contains("centre (5 elements):"));
    }

    #[test]
    fn trivial_monoid() {
        let text = describe_monoid(&corpus::t());
        assert!(text.contains("ideals (2):"), "{text}");
        assert!(text.contains("primes (1):"));
    }
}
