//! Landmark data model, CSV I/O, affine transforms and occlusion.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::rng;

/// Identifier of a landmark, shared across the frames of one sequence.
pub type PointId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landmark {
    pub id: PointId,
    pub x: f64,
    pub y: f64,
}

impl Landmark {
    pub fn new(id: PointId, x: f64, y: f64) -> Self {
        Landmark { id, x, y }
    }

    pub fn xy(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// One frame of labelled 2-D points, kept sorted by point id.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    points: Vec<Landmark>,
}

impl Frame {
    /// Builds a frame, rejecting duplicate ids, non-finite coordinates and
    /// empty point lists.
    pub fn new(mut points: Vec<Landmark>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::arg("a frame needs at least one point"));
        }
        points.sort_by_key(|p| p.id);
        for w in points.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::arg(format!("duplicate point id {}", w[0].id)));
            }
        }
        if let Some(p) = points.iter().find(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::arg(format!("point {} has a non-finite coordinate", p.id)));
        }
        Ok(Frame { points })
    }

    /// Frame with ids `0..coords.len()`.
    pub fn from_coords(coords: &[[f64; 2]]) -> Result<Self> {
        Frame::new(
            coords
                .iter()
                .enumerate()
                .map(|(i, c)| Landmark::new(i, c[0], c[1]))
                .collect(),
        )
    }

    pub fn points(&self) -> &[Landmark] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ids(&self) -> Vec<PointId> {
        self.points.iter().map(|p| p.id).collect()
    }

    /// Position of `id` in [`Frame::points`].
    pub fn index_of(&self, id: PointId) -> Option<usize> {
        self.points.binary_search_by_key(&id, |p| p.id).ok()
    }

    pub fn get(&self, id: PointId) -> Option<&Landmark> {
        self.index_of(id).map(|i| &self.points[i])
    }

    pub fn centroid(&self) -> [f64; 2] {
        let n = self.points.len() as f64;
        let (sx, sy) = self
            .points
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        [sx / n, sy / n]
    }

    /// Keeps only the points whose id satisfies `keep`.
    pub fn retain(&self, mut keep: impl FnMut(PointId) -> bool) -> Result<Frame> {
        Frame::new(self.points.iter().copied().filter(|p| keep(p.id)).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSequence {
    pub name: String,
    pub frames: Vec<Frame>,
}

impl LandmarkSequence {
    pub fn new(name: impl Into<String>, frames: Vec<Frame>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::arg("a sequence needs at least one frame"));
        }
        Ok(LandmarkSequence {
            name: name.into(),
            frames,
        })
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn points_per_frame(&self) -> usize {
        self.frames[0].len()
    }

    /// Serializes to the landmark CSV format read by [`load_landmarks`].
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frame,point,x,y\n");
        for (f, frame) in self.frames.iter().enumerate() {
            for p in frame.points() {
                writeln!(out, "{},{},{},{}", f, p.id, p.x, p.y).unwrap();
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandmarkFormat {
    /// `frame,point,x,y` with a header row.
    Csv,
}

/// Reads a landmark sequence from `path`.
///
/// Frame and point ids are renumbered densely from zero in ascending order.
/// Every frame must carry the same set of point ids.
pub fn load_landmarks(path: &Path, format: LandmarkFormat) -> Result<LandmarkSequence> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_landmarks(&text, format, name)
}

pub fn parse_landmarks(
    text: &str,
    format: LandmarkFormat,
    name: impl Into<String>,
) -> Result<LandmarkSequence> {
    match format {
        LandmarkFormat::Csv => parse_csv(text, name.into()),
    }
}

fn parse_csv(text: &str, name: String) -> Result<LandmarkSequence> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let header = match records.next() {
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
        Some(r) => r.map_err(|e| csv_error(&e))?,
    };
    let cols: Vec<&str> = header.iter().collect();
    if cols != ["frame", "point", "x", "y"] {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `frame,point,x,y`, found `{}`", cols.join(",")),
        });
    }

    // frame id -> rows of (point id, x, y, line)
    let mut raw: BTreeMap<i64, Vec<(i64, f64, f64, usize)>> = BTreeMap::new();
    let mut last_frame: Option<i64> = None;
    for rec in records {
        let rec = rec.map_err(|e| csv_error(&e))?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != 4 {
            return Err(Error::Parse {
                line,
                message: format!("expected 4 fields, found {}", rec.len()),
            });
        }
        let int = |i: usize, what: &str| -> Result<i64> {
            rec[i].parse::<i64>().map_err(|_| Error::Parse {
                line,
                message: format!("bad {what} `{}`", &rec[i]),
            })
        };
        let real = |i: usize, what: &str| -> Result<f64> {
            match rec[i].parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse {
                    line,
                    message: format!("bad {what} `{}`", &rec[i]),
                }),
            }
        };
        let frame = int(0, "frame id")?;
        let point = int(1, "point id")?;
        let x = real(2, "x coordinate")?;
        let y = real(3, "y coordinate")?;
        if let Some(prev) = last_frame {
            if frame < prev {
                return Err(Error::Parse {
                    line,
                    message: format!("frame {frame} appears after frame {prev}; frames must be sorted"),
                });
            }
        }
        last_frame = Some(frame);
        raw.entry(frame).or_default().push((point, x, y, line));
    }
    if raw.is_empty() {
        return Err(Error::Parse {
            line: 2,
            message: "no data rows".into(),
        });
    }

    let mut universe: Vec<i64> = raw.values().flatten().map(|r| r.0).collect();
    universe.sort_unstable();
    universe.dedup();
    let rank = |id: i64| universe.binary_search(&id).unwrap();

    let expected = raw.values().next().unwrap().len();
    let mut frames = Vec::with_capacity(raw.len());
    for (&frame_id, rows) in &raw {
        if rows.len() != expected {
            return Err(Error::Structure {
                frame: frame_id,
                message: format!("has {} points, expected {}", rows.len(), expected),
            });
        }
        let points = rows
            .iter()
            .map(|&(id, x, y, _)| Landmark::new(rank(id), x, y))
            .collect();
        let frame = Frame::new(points).map_err(|e| Error::Structure {
            frame: frame_id,
            message: e.to_string(),
        })?;
        if frame.len() != universe.len() {
            return Err(Error::Structure {
                frame: frame_id,
                message: "point ids differ from the other frames".into(),
            });
        }
        frames.push(frame);
    }
    LandmarkSequence::new(name, frames)
}

fn csv_error(e: &csv::Error) -> Error {
    Error::Parse {
        line: e.position().map(|p| p.line() as usize).unwrap_or(0),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformKind {
    Rotation { degrees: f64 },
    /// Mirror image across the given axis.
    Reflection { axis: Axis },
    Scale { sx: f64, sy: f64 },
    /// `Axis::X` moves x by `factor * y`.
    Shear { factor: f64, axis: Axis },
    Custom,
}

/// `p -> matrix * p + translation`, with an invertible matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTransform {
    matrix: [[f64; 2]; 2],
    translation: [f64; 2],
    kind: TransformKind,
}

impl AffineTransform {
    pub fn new(matrix: [[f64; 2]; 2], translation: [f64; 2]) -> Result<Self> {
        Self::with_kind(matrix, translation, TransformKind::Custom)
    }

    fn with_kind(matrix: [[f64; 2]; 2], translation: [f64; 2], kind: TransformKind) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        let scale = matrix.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        if !det.is_finite() || det.abs() <= 1e-12 * scale * scale || scale == 0.0 {
            return Err(Error::arg(format!("transform matrix is not invertible (det = {det})")));
        }
        if translation.iter().any(|t| !t.is_finite()) {
            return Err(Error::arg("translation must be finite"));
        }
        Ok(AffineTransform {
            matrix,
            translation,
            kind,
        })
    }

    pub fn identity() -> Self {
        AffineTransform {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
            translation: [0.0, 0.0],
            kind: TransformKind::Custom,
        }
    }

    /// Counter-clockwise rotation about the origin.
    pub fn rotation(degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        Self::with_kind([[c, -s], [s, c]], [0.0; 2], TransformKind::Rotation { degrees })
            .expect("rotations are invertible")
    }

    pub fn reflection(axis: Axis) -> Self {
        let m = match axis {
            Axis::Y => [[-1.0, 0.0], [0.0, 1.0]],
            Axis::X => [[1.0, 0.0], [0.0, -1.0]],
        };
        Self::with_kind(m, [0.0; 2], TransformKind::Reflection { axis }).unwrap()
    }

    pub fn scale(sx: f64, sy: f64) -> Result<Self> {
        Self::with_kind([[sx, 0.0], [0.0, sy]], [0.0; 2], TransformKind::Scale { sx, sy })
    }

    pub fn shear(factor: f64, axis: Axis) -> Self {
        let m = match axis {
            Axis::X => [[1.0, factor], [0.0, 1.0]],
            Axis::Y => [[1.0, 0.0], [factor, 1.0]],
        };
        Self::with_kind(m, [0.0; 2], TransformKind::Shear { factor, axis }).unwrap()
    }

    pub fn with_translation(mut self, translation: [f64; 2]) -> Self {
        self.translation = translation;
        self
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        self.matrix
    }

    pub fn translation(&self) -> [f64; 2] {
        self.translation
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn apply_point(&self, p: [f64; 2]) -> [f64; 2] {
        let m = &self.matrix;
        [
            m[0][0] * p[0] + m[0][1] * p[1] + self.translation[0],
            m[1][0] * p[0] + m[1][1] * p[1] + self.translation[1],
        ]
    }

    pub fn inverse(&self) -> Self {
        let m = &self.matrix;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let inv = [
            [m[1][1] / det, -m[0][1] / det],
            [-m[1][0] / det, m[0][0] / det],
        ];
        let t = self.translation;
        let it = [
            -(inv[0][0] * t[0] + inv[0][1] * t[1]),
            -(inv[1][0] * t[0] + inv[1][1] * t[1]),
        ];
        AffineTransform {
            matrix: inv,
            translation: it,
            kind: TransformKind::Custom,
        }
    }

    /// `self` followed by `next`, i.e. `next ∘ self`.
    pub fn then(&self, next: &AffineTransform) -> Self {
        let a = &next.matrix;
        let b = &self.matrix;
        let mut m = [[0.0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let t = next.apply_point(self.translation);
        AffineTransform {
            matrix: m,
            translation: t,
            kind: TransformKind::Custom,
        }
    }

    /// The same linear map applied about `center` instead of the origin.
    pub fn about(&self, center: [f64; 2]) -> Self {
        let mc = self.apply_point(center);
        AffineTransform {
            matrix: self.matrix,
            translation: [
                self.translation[0] + center[0] - (mc[0] - self.translation[0]),
                self.translation[1] + center[1] - (mc[1] - self.translation[1]),
            ],
            kind: self.kind,
        }
    }
}

/// Maps every point through `t`; ids are preserved.
pub fn apply_transform(frame: &Frame, t: &AffineTransform) -> Frame {
    let points = frame
        .points()
        .iter()
        .map(|p| {
            let [x, y] = t.apply_point(p.xy());
            Landmark::new(p.id, x, y)
        })
        .collect();
    Frame { points }
}

/// Applies `t` about the frame centroid.
pub fn apply_about_centroid(frame: &Frame, t: &AffineTransform) -> Frame {
    apply_transform(frame, &t.about(frame.centroid()))
}

/// Removes `remove_count` uniformly chosen points. Returns the surviving
/// frame and the removed ids in ascending order.
pub fn occlude(frame: &Frame, remove_count: usize, rng_seed: u64) -> Result<(Frame, Vec<PointId>)> {
    if remove_count >= frame.len() {
        return Err(Error::arg(format!(
            "cannot remove {remove_count} of {} points",
            frame.len()
        )));
    }
    let mut rng = rng::seeded(rng_seed);
    let mut removed: Vec<PointId> = sample(&mut rng, frame.len(), remove_count)
        .into_iter()
        .map(|i| frame.points()[i].id)
        .collect();
    removed.sort_unstable();
    let survivors = frame.retain(|id| removed.binary_search(&id).is_err())?;
    Ok((survivors, removed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: [f64; 2], b: [f64; 2], tol: f64) -> bool {
        (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol
    }

    #[test]
    fn csv_two_frames_three_points() {
        let text = "frame,point,x,y\n0,1,0,0\n0,2,1,0\n0,3,0,1\n1,1,5,5\n1,2,6,5\n1,3,5,6\n";
        let seq = parse_landmarks(text, LandmarkFormat::Csv, "t").unwrap();
        assert_eq!(seq.frame_count(), 2);
        assert_eq!(seq.points_per_frame(), 3);
        // ids renumbered from zero
        assert_eq!(seq.frames[1].ids(), vec![0, 1, 2]);
        assert_eq!(seq.frames[1].get(2).unwrap().xy(), [5.0, 6.0]);
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        let err = parse_landmarks("", LandmarkFormat::Csv, "t").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn malformed_row_reports_its_line() {
        let text = "frame,point,x,y\n0,0,1,1\n0,1,abc,2\n";
        match parse_landmarks(text, LandmarkFormat::Csv, "t").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn inconsistent_point_counts_name_the_frame() {
        let text = "frame,point,x,y\n0,0,1,1\n0,1,2,2\n7,0,1,1\n";
        match parse_landmarks(text, LandmarkFormat::Csv, "t").unwrap_err() {
            Error::Structure { frame, .. } => assert_eq!(frame, 7),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unsorted_frames_are_rejected() {
        let text = "frame,point,x,y\n1,0,1,1\n0,0,2,2\n";
        assert!(matches!(
            parse_landmarks(text, LandmarkFormat::Csv, "t"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn house_shaped_file() {
        let mut text = String::from("frame,point,x,y\n");
        for f in 0..111 {
            for p in 0..30 {
                text.push_str(&format!("{f},{p},{}.5,{}\n", p * 3 + f, p * 7));
            }
        }
        let seq = parse_landmarks(&text, LandmarkFormat::Csv, "house").unwrap();
        assert_eq!((seq.frame_count(), seq.points_per_frame()), (111, 30));
        let again = parse_landmarks(&seq.to_csv(), LandmarkFormat::Csv, "house").unwrap();
        assert_eq!(again, seq);
    }

    #[test]
    fn elementary_transforms() {
        let f = Frame::from_coords(&[[1.0, 0.0]]).unwrap();
        let r = apply_transform(&f, &AffineTransform::rotation(90.0));
        assert!(close(r.points()[0].xy(), [0.0, 1.0], 1e-12));

        let f = Frame::from_coords(&[[1.0, 2.0]]).unwrap();
        let r = apply_transform(&f, &AffineTransform::reflection(Axis::Y));
        assert_eq!(r.points()[0].xy(), [-1.0, 2.0]);

        let f = Frame::from_coords(&[[1.0, 1.0]]).unwrap();
        let r = apply_transform(&f, &AffineTransform::shear(0.5, Axis::X));
        assert_eq!(r.points()[0].xy(), [1.5, 1.0]);
    }

    #[test]
    fn singular_matrix_rejected() {
        assert!(AffineTransform::new([[1.0, 2.0], [2.0, 4.0]], [0.0, 0.0]).is_err());
        assert!(AffineTransform::scale(0.0, 1.0).is_err());
    }

    #[test]
    fn about_centroid_keeps_centroid_fixed() {
        let f = Frame::from_coords(&[[0.0, 0.0], [4.0, 0.0], [2.0, 6.0]]).unwrap();
        let g = apply_about_centroid(&f, &AffineTransform::rotation(37.0));
        assert!(close(f.centroid(), g.centroid(), 1e-12));
    }

    #[test]
    fn occlusion_edges() {
        let coords: Vec<[f64; 2]> = (0..30).map(|i| [i as f64, (i * i) as f64]).collect();
        let f = Frame::from_coords(&coords).unwrap();

        let (same, removed) = occlude(&f, 0, 1).unwrap();
        assert_eq!(same, f);
        assert!(removed.is_empty());

        let (one, removed) = occlude(&f, 29, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(removed.len(), 29);

        let (rest, removed) = occlude(&f, 10, 3).unwrap();
        assert_eq!(rest.len(), 20);
        assert!(removed.iter().all(|id| rest.get(*id).is_none()));
        for p in rest.points() {
            assert_eq!(f.get(p.id), Some(p));
        }

        assert!(occlude(&f, 30, 1).is_err());
    }

    fn arb_transform() -> impl Strategy<Value = AffineTransform> {
        (
            prop::array::uniform4(-3.0f64..3.0),
            prop::array::uniform2(-50.0f64..50.0),
        )
            .prop_filter_map("singular", |(m, t)| {
                let m = [[m[0], m[1]], [m[2], m[3]]];
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                (det.abs() > 0.05).then(|| AffineTransform::new(m, t).unwrap())
            })
    }

    fn arb_frame() -> impl Strategy<Value = Frame> {
        prop::collection::vec(prop::array::uniform2(-100.0f64..100.0), 1..20)
            .prop_map(|c| Frame::from_coords(&c).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_round_trip(f in arb_frame(), t in arb_transform()) {
            let back = apply_transform(&apply_transform(&f, &t), &t.inverse());
            for (a, b) in f.points().iter().zip(back.points()) {
                prop_assert!(close(a.xy(), b.xy(), 1e-9));
            }
        }

        #[test]
        fn composition(f in arb_frame(), t1 in arb_transform(), t2 in arb_transform()) {
            let once = apply_transform(&f, &t1.then(&t2));
            let twice = apply_transform(&apply_transform(&f, &t1), &t2);
            for (a, b) in once.points().iter().zip(twice.points()) {
                prop_assert!(close(a.xy(), b.xy(), 1e-9));
            }
        }

        #[test]
        fn occlusion_is_deterministic(seed in any::<u64>(), k in 0usize..9) {
            let coords: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 0.0]).collect();
            let f = Frame::from_coords(&coords).unwrap();
            prop_assert_eq!(occlude(&f, k, seed).unwrap(), occlude(&f, k, seed).unwrap());
        }
    }
}
