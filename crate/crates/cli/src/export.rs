//! CSV, OBJ and JSON writers. Floats carry 17 significant digits, lines end
//! in LF, and every file is written to a sibling temporary and renamed.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use plr_soliton::curve::MeshExport;

use crate::CliError;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Write `contents` to `path` atomically (same-directory temp + rename).
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let name = path.file_name().ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)
}

/// Build a CSV document from a header and rows of preformatted cells.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Wavefront OBJ with 1-based quad faces. Degenerate vertices are written
/// as `v nan nan nan` so that indices keep the lattice layout.
pub fn mesh_obj(mesh: &MeshExport, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "# lattice {} x {}", mesh.n_s, mesh.n_t);
    let _ = writeln!(out, "# dropped_faces {}", mesh.dropped_faces);
    for v in &mesh.vertices {
        match v {
            Some(p) => {
                let _ = writeln!(out, "v {} {} {}", fmt_f64(p.p), fmt_f64(p.q), fmt_f64(p.r));
            }
            None => out.push_str("v nan nan nan\n"),
        }
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    }
    out
}

/// Per-vertex table: index, (s, t), position and Frenet data.
pub fn mesh_csv(mesh: &MeshExport) -> String {
    let rows = mesh.vertices.iter().zip(&mesh.meta).enumerate().map(|(k, (v, m))| {
        let (x, y, z) = match v {
            Some(p) => (fmt_f64(p.p), fmt_f64(p.q), fmt_f64(p.r)),
            None => Default::default(),
        };
        vec![k.to_string(), fmt_f64(m.s), fmt_f64(m.t), x, y, z, fmt_opt(m.kappa), fmt_opt(m.tau)]
    });
    csv(&["index", "s", "t", "x", "y", "z", "kappa", "tau"], rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use plr_soliton::curve::swept_surface;
    use plr_soliton::{GridSpec, Preset};

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456.789, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
    }

    #[test]
    fn csv_has_header_and_lf_only() {
        let s = csv(&["a", "b"], vec![vec!["1".into(), "2".into()]]);
        assert_eq!(s, "a,b\n1,2\n");
        assert!(!s.contains('\r'));
    }

    #[test]
    fn obj_counts_match_the_lattice() {
        let g = GridSpec::square(-1.0, 1.0, 4).unwrap();
        let mesh = swept_surface(&Preset::A.params(), &g, false).unwrap();
        let obj = mesh_obj(&mesh, "test");
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 16);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 9);
        assert!(obj.lines().filter(|l| l.starts_with("f ")).all(|l| l.split(' ').skip(1).all(|i| (1..=16).contains(&i.parse::<usize>().unwrap()))));
        assert_eq!(mesh_csv(&mesh).lines().count(), 17);
    }

    #[test]
    fn atomic_write_leaves_no_temporary() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("x.csv");
        write_atomic(&path, b"a\n").unwrap();
        write_atomic(&path, b"b\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "b\n");
        let names: Vec<_> = fs::read_dir(path.parent().unwrap()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 1);
    }
}
