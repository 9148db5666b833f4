use minsurf_core::mesh::{
    export_grid_csv, export_lines_csv, export_obj, export_ply, read_obj, sample_grid, Variant,
};
use minsurf_core::verify::{curvature_lines, planarity_ratio};
use minsurf_core::{Domain, Grid, ShapeParam, Vec3};

fn grid(nu: usize, nv: usize) -> Grid {
    Grid::new(Domain::unit_square(), nu, nv).unwrap()
}

#[test]
fn obj_counts_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = ShapeParam::new(2.0).unwrap();
    for (n, faces) in [(2, 1), (3, 4)] {
        let m = sample_grid(&p, Variant::Plain, &grid(n, n)).unwrap();
        let path = dir.path().join(format!("m{n}.obj"));
        export_obj(&m, &path).unwrap();
        let d = read_obj(&path).unwrap();
        assert_eq!(d.positions.len(), n * n);
        assert_eq!(d.faces.len(), faces);
        assert_eq!(d.positions, m.positions);
        assert_eq!(d.normals, m.normals);
    }
}

#[test]
fn obj_faces_use_row_major_indices() {
    let dir = tempfile::tempdir().unwrap();
    let m = sample_grid(&ShapeParam::new(0.3).unwrap(), Variant::Tilde, &grid(3, 4)).unwrap();
    let path = dir.path().join("m.obj");
    export_obj(&m, &path).unwrap();
    let d = read_obj(&path).unwrap();
    // quad at (r, c) = (1, 2) with nv = 4
    assert!(d.faces.contains(&vec![7, 11, 12, 8]));
    assert!(d.faces.iter().flatten().all(|&i| (1..=12).contains(&i)));
}

#[test]
fn ply_payload_decodes() {
    let dir = tempfile::tempdir().unwrap();
    let m = sample_grid(
        &ShapeParam::new(-0.3).unwrap(),
        Variant::Conjugate,
        &grid(3, 3),
    )
    .unwrap();
    let path = dir.path().join("m.ply");
    export_ply(&m, &path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    let end = b"end_header\n";
    let start = bytes.windows(end.len()).position(|w| w == end).unwrap() + end.len();
    let f =
        |i: usize| f64::from_le_bytes(bytes[start + 8 * i..start + 8 * i + 8].try_into().unwrap());
    for (k, (x, n)) in m.positions.iter().zip(&m.normals).enumerate() {
        let got = Vec3::new(f(6 * k), f(6 * k + 1), f(6 * k + 2));
        let gn = Vec3::new(f(6 * k + 3), f(6 * k + 4), f(6 * k + 5));
        assert_eq!(got, *x);
        assert_eq!(gn, *n);
    }
}

#[test]
fn csv_exports() {
    let dir = tempfile::tempdir().unwrap();
    let p = ShapeParam::new(0.3).unwrap();
    let m = sample_grid(&p, Variant::Plain, &grid(3, 3)).unwrap();
    let path = dir.path().join("g.csv");
    export_grid_csv(&m, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("u,v,x1,x2,x3\n"));
    assert!(!text.contains('\r'));
    let center: Vec<f64> = text
        .lines()
        .nth(5)
        .unwrap()
        .split(',')
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(center, vec![0.0, 0.0, 0.0, 0.0, 0.0]);

    let lines = curvature_lines(&Domain::unit_square(), 3, 25);
    let path = dir.path().join("l.csv");
    export_lines_csv(&p, Variant::Plain, &lines, &path).unwrap();
    let rows: Vec<Vec<f64>> = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6 * 25);
    for block in rows.chunks(25) {
        let pts: Vec<Vec3> = block.iter().map(|r| Vec3::new(r[2], r[3], r[4])).collect();
        assert!(planarity_ratio(&pts).unwrap() <= 1e-8);
    }
}
