use super::*;
use proptest::prelude::*;

fn two_tets() -> Complex3 {
    let mut e = [Vec4::zeros(); 5];
    for (i, v) in e.iter_mut().enumerate().skip(1) {
        v[i - 1] = 1.0;
    }
    Complex3 {
        vertices: e.to_vec(),
        tets: vec![[0, 1, 2, 3], [0, 1, 2, 4]],
        fixed: vec![false, true, true, true, true],
    }
}

#[test]
fn complex_round_trip_is_exact() {
    let c = two_tets();
    let text = OffMesh::from_complex(&c).to_text();
    assert!(text.starts_with("4OFF\n# plcone-mesh version=1 kind=complex3 fixed=1\n5 2 0\n"));
    let back = OffMesh::parse(&text).unwrap().into_complex().unwrap();
    assert_eq!(back, c);
}

#[test]
fn empty_mesh_is_valid() {
    let text = export(ExportObject::Empty, ExportFormat::Off).unwrap();
    assert_eq!(text, "4OFF\n# plcone-mesh version=1 kind=complex3 fixed=1\n0 0 0\n");
    let m = OffMesh::parse(&text).unwrap();
    assert!(m.vertices.is_empty() && m.cells.is_empty());
    assert!(m.into_complex().unwrap().is_empty());
}

#[test]
fn simplex_skeleton_export() {
    let text = export("T4".parse().unwrap(), ExportFormat::Off).unwrap();
    let m = OffMesh::parse(&text).unwrap();
    assert_eq!(m.kind, MeshKind::Skeleton);
    assert_eq!((m.vertices.len(), m.cells.len()), (5, 10));
    assert!(m.cells.iter().all(|c| c.len() == 3));
    assert!(m.fixed.is_none());
}

#[test]
fn dodecahedral_cell_json() {
    let text = export("C8".parse().unwrap(), ExportFormat::Json).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["vertex_count"], 20);
    assert_eq!(v["face_count"], 12);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 20);
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn exports_are_byte_stable() {
    for o in ["cone:T5", "skeleton:T7", "cell:C5", "T9"] {
        let o: ExportObject = o.parse().unwrap();
        for f in [ExportFormat::Off, ExportFormat::Json] {
            assert_eq!(export(o, f).unwrap(), export(o, f).unwrap(), "{o}");
        }
    }
}

#[test]
fn popped_export_matches_mass() {
    let text = export("pop:T5:C4".parse().unwrap(), ExportFormat::Off).unwrap();
    let c = OffMesh::parse(&text).unwrap().into_complex().unwrap();
    assert!((c.mass() - 2.133).abs() < 1e-3);
}

#[test]
fn object_and_format_names() {
    assert_eq!("cell:C8".parse::<ExportObject>().unwrap(), ExportObject::Cell(CellType::C8));
    assert_eq!("skeleton:t4".parse::<ExportObject>().unwrap(), ExportObject::Skeleton(PartitionLabel::T4));
    assert!(matches!("T10".parse::<ExportObject>(), Err(IoError::UnknownObject(_))));
    assert!(matches!("C12".parse::<ExportObject>(), Err(IoError::UnknownObject(_))));
    assert!(matches!("stl".parse::<ExportFormat>(), Err(IoError::UnknownFormat(_))));
    assert_eq!("JSON".parse::<ExportFormat>().unwrap(), ExportFormat::Json);
}

#[test]
fn parse_errors_carry_lines() {
    let cases = [
        ("OFF\n0 0 0\n", 1),
        ("4OFF\n1 0 0\n0 0 0\n", 3),
        ("4OFF\n1 1 0\n0 0 0 0\n3 0 0 1\n", 4),
        ("4OFF\n# plcone-mesh version=2\n0 0 0\n", 2),
        ("4OFF\n# plcone-mesh version=1 kind=complex3 fixed=1\n1 0 0\n0 0 0 0 2\n", 4),
        ("4OFF\n0 0 0\n1 2 3\n", 3),
    ];
    for (text, line) in cases {
        match OffMesh::parse(text) {
            Err(IoError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    let tri = OffMesh::parse("4OFF\n3 1 0\n0 0 0 0\n1 0 0 0\n0 1 0 0\n3 0 1 2\n").unwrap();
    assert!(tri.into_complex().is_err());
}

proptest! {
    #[test]
    fn off_round_trip(
        pts in prop::collection::vec(prop::array::uniform4(-1e6f64..1e6), 4..12),
        flags in prop::collection::vec(any::<bool>(), 12),
        picks in prop::collection::vec(prop::array::uniform4(0usize..4), 0..8),
    ) {
        let n = pts.len();
        let c = Complex3 {
            vertices: pts.iter().map(|p| Vec4::from(*p)).collect(),
            tets: picks.iter().map(|t| t.map(|i| (i * 7 + 1) % n)).collect(),
            fixed: flags[..n].to_vec(),
        };
        let text = OffMesh::from_complex(&c).to_text();
        let back = OffMesh::parse(&text).unwrap().into_complex().unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(OffMesh::from_complex(&back).to_text(), text);
    }
}
