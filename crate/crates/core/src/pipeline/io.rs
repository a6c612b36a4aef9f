//! Point-cloud CSV files: header `re_z,im_z,re_w,im_w,set,stage`, floats
//! printed with 17 significant digits so that every `f64` round-trips.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{C2Point, CloudTag, PointCloud};

pub const CSV_HEADER: [&str; 6] = ["re_z", "im_z", "re_w", "im_w", "set", "stage"];

pub fn write_cloud_to(cloud: &PointCloud, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::parse("cloud csv", e);
    w.write_record(CSV_HEADER).map_err(err)?;
    let stage = cloud.stage().map(|s| s.to_string()).unwrap_or_default();
    for p in cloud.iter() {
        w.write_record([
            format!("{:.16e}", p.z.re),
            format!("{:.16e}", p.z.im),
            format!("{:.16e}", p.w.re),
            format!("{:.16e}", p.w.im),
            cloud.tag().as_str().to_string(),
            stage.clone(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::parse("cloud csv", e))?;
    Ok(())
}

pub fn write_cloud(cloud: &PointCloud, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = BufWriter::new(f);
    write_cloud_to(cloud, &mut buf)?;
    buf.flush().map_err(|e| Error::io(path, e))
}

/// Reads a cloud; every row must carry the same set and stage. An empty
/// file body yields an empty cloud tagged `fallback`.
pub fn read_cloud_from(input: impl std::io::Read, fallback: CloudTag, tol: f64) -> Result<PointCloud> {
    let mut r = csv::Reader::from_reader(input);
    let what = "cloud csv";
    let header = r.headers().map_err(|e| Error::parse(what, e))?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::parse(what, format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut pts = Vec::new();
    let mut meta: Option<(String, String)> = None;
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::parse(what, e))?;
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse::<f64>()
                .map_err(|e| Error::parse(what, format!("row {}: column {}: {e}", i + 1, CSV_HEADER[k])))
        };
        pts.push(C2Point::new(Complex64::new(num(0)?, num(1)?), Complex64::new(num(2)?, num(3)?)));
        let m = (rec[4].to_string(), rec[5].to_string());
        match &meta {
            None => meta = Some(m),
            Some(first) if *first != m => {
                return Err(Error::parse(what, format!("row {}: mixed set/stage columns", i + 1)));
            }
            _ => {}
        }
    }
    let (tag, stage) = match meta {
        None => (fallback, None),
        Some((t, s)) => {
            let tag: CloudTag = t.parse()?;
            let stage = if s.is_empty() {
                None
            } else {
                Some(s.parse::<usize>().map_err(|e| Error::parse(what, format!("stage {s:?}: {e}")))?)
            };
            (tag, stage)
        }
    };
    if pts.is_empty() {
        return Ok(PointCloud::empty(tag, stage, tol));
    }
    PointCloud::new(pts, tag, stage, tol)
}

pub fn read_cloud(path: &Path, fallback: CloudTag, tol: f64) -> Result<PointCloud> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_cloud_from(std::io::BufReader::new(f), fallback, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_and_format() {
        let c = PointCloud::new(vec![C2Point::real(0.1, -1.0)], CloudTag::K, Some(3), 1e-12).unwrap();
        let mut buf = Vec::new();
        write_cloud_to(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "re_z,im_z,re_w,im_w,set,stage\n1.0000000000000001e-1,0.0000000000000000e0,-1.0000000000000000e0,0.0000000000000000e0,K,3\n"
        );
    }

    #[test]
    fn malformed_input() {
        let bad_header = "a,b,c,d,e,f\n";
        assert!(read_cloud_from(bad_header.as_bytes(), CloudTag::V, 1e-12).is_err());
        let bad_num = "re_z,im_z,re_w,im_w,set,stage\n0.1,x,0,0,V,1\n";
        assert!(read_cloud_from(bad_num.as_bytes(), CloudTag::V, 1e-12).is_err());
        let mixed = "re_z,im_z,re_w,im_w,set,stage\n0,0,0,0,V,1\n0,0,0,0,V,2\n";
        assert!(read_cloud_from(mixed.as_bytes(), CloudTag::V, 1e-12).is_err());
        let empty = "re_z,im_z,re_w,im_w,set,stage\n";
        let c = read_cloud_from(empty.as_bytes(), CloudTag::Y, 1e-12).unwrap();
        assert!(c.is_empty() && c.tag() == CloudTag::Y);
        assert_eq!(read_cloud(Path::new("/nonexistent/x.csv"), CloudTag::V, 1e-12).unwrap_err().exit_code(), 4);
    }

    proptest! {
        #[test]
        fn lossless_round_trip(
            pts in proptest::collection::vec((-0.7f64..0.7, -0.7f64..0.7, -0.7f64..0.7, -0.7f64..0.7), 1..40),
            stage in proptest::option::of(0usize..20),
        ) {
            let pts: Vec<C2Point> = pts
                .into_iter()
                .map(|(a, b, c, d)| C2Point::new(Complex64::new(a, b), Complex64::new(c, d)))
                .collect();
            let cloud = PointCloud::new(pts, CloudTag::MWitness, stage, 1e-12).unwrap();
            let mut buf = Vec::new();
            write_cloud_to(&cloud, &mut buf).unwrap();
            let back = read_cloud_from(buf.as_slice(), CloudTag::V, 1e-12).unwrap();
            prop_assert_eq!(back, cloud);
        }
    }
}
