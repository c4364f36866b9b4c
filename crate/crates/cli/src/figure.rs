//! Marker-grid renderings of a census, one grid per subgroup family:
//! `r` runs 1..20 on the horizontal axis, `a` runs 0..11 vertically.
//!
//! Each cell shows which marker classes of the family hit that `(r, a)`:
//! a big circle for `delta_phiS = 0, v = 0`, a small circle for
//! `delta_phiS = 0, v != 0`, a dot for `delta_phiS = 1`. In ASCII these are
//! `O`, `o`, `*`, with `@`, `Q`, `q`, `#` for cells where classes overlap
//! concentrically.

use k3census::census::GenusInvariant;
use k3census::lattice::{make_type, Surface};

pub const R_MAX: u8 = 20;
pub const A_MAX: u8 = 11;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FigureFormat {
    Ascii,
    Svg,
}

/// What to render: one subgroup family of a surface, or all of them.
#[derive(Clone, Debug)]
pub struct FigureSpec {
    pub surface: Surface,
    /// Catalog index; `None` renders every family in catalog order.
    pub h_filter: Option<usize>,
    pub format: FigureFormat,
}

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Cell {
    type0: bool,
    type_ia: bool,
    type_ib: bool,
}

impl Cell {
    fn ascii(self) -> char {
        match (self.type0, self.type_ia, self.type_ib) {
            (false, false, false) => '.',
            (true, false, false) => 'O',
            (false, true, false) => 'o',
            (false, false, true) => '*',
            (true, true, false) => '@',
            (true, false, true) => 'Q',
            (false, true, true) => 'q',
            (true, true, true) => '#',
        }
    }
}

struct Family {
    surface: Surface,
    h_name: &'static str,
    /// Name of the nonzero characteristic element, when the family has one.
    v_nonzero: Option<String>,
    has_type0: bool,
    cells: Vec<Vec<Cell>>, // [a][r-1]
}

fn collect_family(surface: Surface, h_idx: usize, census: &[GenusInvariant]) -> Family {
    let mut cells = vec![vec![Cell::default(); R_MAX as usize]; A_MAX as usize + 1];
    let mut v_nonzero = None;
    let mut has_type0 = false;
    for g in census.iter().filter(|g| g.h == h_idx) {
        if g.a > A_MAX || g.r == 0 || g.r > R_MAX {
            continue;
        }
        let cell = &mut cells[g.a as usize][g.r as usize - 1];
        match g.tuple_type() {
            k3census::census::TupleType::Zero => {
                cell.type0 = true;
                has_type0 = true;
            }
            k3census::census::TupleType::Ia => {
                cell.type_ia = true;
                if v_nonzero.is_none() {
                    v_nonzero = g.v_name();
                }
            }
            k3census::census::TupleType::Ib => cell.type_ib = true,
        }
    }
    Family {
        surface,
        h_name: make_type(surface).subgroup(h_idx).name,
        v_nonzero,
        has_type0,
        cells,
    }
}

fn ascii_of(fam: &Family) -> String {
    let mut out = String::new();
    out.push_str(&format!("surface={} H={}\n", fam.surface.name(), fam.h_name));
    let empty = fam
        .cells
        .iter()
        .all(|row| row.iter().all(|c| *c == Cell::default()));
    out.push_str("  a\n");
    for a in (0..=A_MAX).rev() {
        out.push_str(&format!(" {a:2} |"));
        for r in 1..=R_MAX {
            out.push_str(&format!("{:>3}", fam.cells[a as usize][r as usize - 1].ascii()));
        }
        out.push('\n');
    }
    out.push_str("    +");
    out.push_str(&"-".repeat(3 * R_MAX as usize));
    out.push('\n');
    out.push_str("  r  ");
    for r in 1..=R_MAX {
        out.push_str(&format!("{r:>3}"));
    }
    out.push('\n');
    if empty {
        out.push_str("warning: no census tuples in this family\n");
        return out;
    }
    if fam.has_type0 {
        out.push_str("  O  delta_phiS=0, v=0\n");
    }
    if let Some(v) = &fam.v_nonzero {
        out.push_str(&format!("  o  delta_phiS=0, v={v}\n"));
    }
    out.push_str("  *  delta_phiS=1\n");
    out.push_str("  overlaps: @ = O+o, Q = O+*, q = o+*, # = O+o+*\n");
    out
}

fn svg_of(fam: &Family) -> String {
    const STEP: i64 = 24;
    const PAD: i64 = 40;
    let width = PAD + STEP * (R_MAX as i64 + 1);
    let height = PAD + STEP * (A_MAX as i64 + 2);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!(
        "  <text x=\"{PAD}\" y=\"20\" font-size=\"13\">surface={} H={}</text>\n",
        fam.surface.name(),
        fam.h_name
    ));
    let cx = |r: u8| PAD + STEP * r as i64;
    let cy = |a: u8| height - PAD - STEP * a as i64;
    // Grid frame.
    out.push_str(&format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#ccc\"/>\n",
        cx(1) - STEP / 2,
        cy(A_MAX) - STEP / 2,
        STEP * R_MAX as i64,
        STEP * (A_MAX as i64 + 1),
    ));
    for r in 1..=R_MAX {
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"middle\">{r}</text>\n",
            cx(r),
            height - PAD + 14
        ));
    }
    for a in 0..=A_MAX {
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"end\">{a}</text>\n",
            PAD - STEP / 2,
            cy(a) + 3
        ));
    }
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"11\">r</text>\n",
        width - 14,
        height - PAD + 14
    ));
    out.push_str(&format!("  <text x=\"8\" y=\"{}\" font-size=\"11\">a</text>\n", cy(A_MAX)));
    for a in 0..=A_MAX {
        for r in 1..=R_MAX {
            let cell = fam.cells[a as usize][r as usize - 1];
            let (x, y) = (cx(r), cy(a));
            if cell.type0 {
                out.push_str(&format!(
                    "  <circle cx=\"{x}\" cy=\"{y}\" r=\"8\" fill=\"none\" stroke=\"black\"/>\n"
                ));
            }
            if cell.type_ia {
                out.push_str(&format!(
                    "  <circle cx=\"{x}\" cy=\"{y}\" r=\"5\" fill=\"none\" stroke=\"black\"/>\n"
                ));
            }
            if cell.type_ib {
                out.push_str(&format!(
                    "  <circle cx=\"{x}\" cy=\"{y}\" r=\"2.5\" fill=\"black\" stroke=\"none\"/>\n"
                ));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Render one family of a surface census.
pub fn render_family(
    surface: Surface,
    h_idx: usize,
    census: &[GenusInvariant],
    format: FigureFormat,
) -> String {
    let fam = collect_family(surface, h_idx, census);
    match format {
        FigureFormat::Ascii => ascii_of(&fam),
        FigureFormat::Svg => svg_of(&fam),
    }
}

/// Render the selected family, or all families in catalog order
/// separated by blank lines.
pub fn render(spec: &FigureSpec, census: &[GenusInvariant]) -> String {
    let t = make_type(spec.surface);
    match spec.h_filter {
        Some(h) => render_family(spec.surface, h, census, spec.format),
        None => {
            let parts: Vec<String> = (0..t.subgroups.len())
                .map(|h| render_family(spec.surface, h, census, spec.format))
                .collect();
            parts.join("\n")
        }
    }
}
