use super::{Polyline, Signature, Zipper};
use crate::error::{Error, Result};
use crate::geom::{Rotation3, Similarity3, Vec3};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDoc {
    pub ratio: f64,
    pub axis: Vec3,
    pub angle: f64,
    pub shift: Vec3,
}

/// JSON form of a zipper.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZipperDoc {
    pub vertices: Vec<Vec3>,
    pub signature: Signature,
    pub maps: Vec<MapDoc>,
}

impl From<&Zipper> for ZipperDoc {
    fn from(z: &Zipper) -> Self {
        let maps = z
            .maps
            .iter()
            .map(|s| {
                let (axis, angle) = s.rot.axis_angle();
                MapDoc { ratio: s.ratio, axis, angle, shift: s.shift }
            })
            .collect();
        ZipperDoc { vertices: z.vertices.clone(), signature: z.signature.clone(), maps }
    }
}

impl TryFrom<ZipperDoc> for Zipper {
    type Error = Error;
    fn try_from(d: ZipperDoc) -> Result<Zipper> {
        let maps = d
            .maps
            .iter()
            .map(|m| Similarity3::new(m.ratio, Rotation3::from_axis_angle(m.axis, m.angle), m.shift))
            .collect::<Result<Vec<_>>>()?;
        Zipper::new(maps, d.vertices, d.signature)
    }
}

impl Zipper {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ZipperDoc::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Zipper> {
        let doc: ZipperDoc = serde_json::from_str(s)?;
        Zipper::try_from(doc)
    }
}

impl Polyline {
    /// CSV with header `t,x,y,z`; floats in shortest round-trip form.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x,y,z")?;
        for (t, p) in &self.points {
            writeln!(w, "{},{},{},{}", t, p.x, p.y, p.z)?;
        }
        Ok(())
    }

    /// ASCII PLY with vertices and one edge per consecutive pair.
    pub fn write_ply<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.points.len();
        writeln!(w, "ply\nformat ascii 1.0")?;
        writeln!(w, "element vertex {n}\nproperty double x\nproperty double y\nproperty double z")?;
        writeln!(w, "element edge {}\nproperty int vertex1\nproperty int vertex2", n.saturating_sub(1))?;
        writeln!(w, "end_header")?;
        for (_, p) in &self.points {
            writeln!(w, "{} {} {}", p.x, p.y, p.z)?;
        }
        for i in 1..n {
            writeln!(w, "{} {}", i - 1, i)?;
        }
        Ok(())
    }
}
