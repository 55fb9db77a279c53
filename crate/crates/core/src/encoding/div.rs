use super::{DenseEncoding, Encoder, EncodingError, GridId, Method, TileGrid};
use crate::geometry::{intersects_rect, Geometry};

/// Discrete indicator vector encoder: element `i` is 1 when the geometry
/// touches closed tile `i`, else 0. A geometry lying on a shared tile edge
/// lights both tiles.
#[derive(Debug, Clone, PartialEq)]
pub struct DivConfig {
    tiles: TileGrid,
}

impl DivConfig {
    pub fn new(tiles: TileGrid) -> Self {
        DivConfig { tiles }
    }

    pub fn tiles(&self) -> &TileGrid {
        &self.tiles
    }

    pub fn encode(&self, g: &Geometry) -> Result<DenseEncoding, EncodingError> {
        g.validate()?;
        let bb = g.bbox();
        let values = self
            .tiles
            .tiles()
            .iter()
            .map(|t| {
                if t.intersects(&bb) && intersects_rect(g, t) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        Ok(DenseEncoding::new(values, self.tiles.id().clone()))
    }
}

impl Encoder for DivConfig {
    fn method(&self) -> Method {
        Method::Div
    }
    fn grid_id(&self) -> &GridId {
        self.tiles.id()
    }
    fn dim(&self) -> usize {
        self.tiles.len()
    }
    fn encode(&self, g: &Geometry) -> Result<DenseEncoding, EncodingError> {
        DivConfig::encode(self, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::make_grids;
    use crate::geometry::{Frame, Point2};

    fn cfg() -> DivConfig {
        let f = Frame::sized(100.0, 100.0).unwrap();
        DivConfig::new(make_grids(&f, 25.0).unwrap().1)
    }

    #[test]
    fn covering_polygon_lights_everything() {
        let g = Geometry::polygon(
            vec![
                Point2::new(-1., -1.),
                Point2::new(101., -1.),
                Point2::new(101., 101.),
                Point2::new(-1., 101.),
                Point2::new(-1., -1.),
            ],
            vec![],
        )
        .unwrap();
        assert!(cfg().encode(&g).unwrap().values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn interior_point_lights_one_tile() {
        let e = cfg().encode(&Geometry::point(30.0, 60.0).unwrap()).unwrap();
        assert_eq!(e.values().iter().sum::<f64>(), 1.0);
        assert_eq!(e.values()[2 * 4 + 1], 1.0);
    }

    #[test]
    fn shared_edge_lights_both_tiles() {
        let e = cfg().encode(&Geometry::point(25.0, 60.0).unwrap()).unwrap();
        assert_eq!(e.values().iter().sum::<f64>(), 2.0);
        let corner = cfg().encode(&Geometry::point(25.0, 50.0).unwrap()).unwrap();
        assert_eq!(corner.values().iter().sum::<f64>(), 4.0);
    }

    #[test]
    fn polygon_containing_whole_tile() {
        let g = Geometry::polygon(
            vec![
                Point2::new(20., 20.),
                Point2::new(80., 20.),
                Point2::new(50., 95.),
                Point2::new(20., 20.),
            ],
            vec![],
        )
        .unwrap();
        let e = cfg().encode(&g).unwrap();
        // Tile (row 1, col 1) = [25,50]x[25,50] lies entirely inside.
        assert_eq!(e.values()[5], 1.0);
        assert_eq!(e.values()[0], 1.0);
        assert_eq!(e.values()[15], 0.0);
    }
}
