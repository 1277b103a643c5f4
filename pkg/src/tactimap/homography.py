"""Plane-to-plane projective calibration between camera and map coordinates.

The camera looks at the physical map from an arbitrary oblique angle, so
pixel coordinates relate to map-surface meters by a homography. The fit
uses the direct linear transform on normalized coordinates, which keeps
the solve well conditioned regardless of the pixel scale.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

Pair = Sequence[float]


class CalibrationError(ValueError):
    """The correspondences do not determine a usable homography."""


def _normalization(points: np.ndarray) -> np.ndarray:
    """Similarity transform taking points to centroid 0, mean distance sqrt(2)."""
    centroid = points.mean(axis=0)
    spread = np.sqrt(((points - centroid) ** 2).sum(axis=1)).mean()
    if spread < 1e-12:
        raise CalibrationError("correspondence points are coincident")
    s = math.sqrt(2.0) / spread
    return np.array(
        [
            [s, 0.0, -s * centroid[0]],
            [0.0, s, -s * centroid[1]],
            [0.0, 0.0, 1.0],
        ]
    )


def _apply3(t: np.ndarray, points: np.ndarray) -> np.ndarray:
    homog = np.hstack([points, np.ones((len(points), 1))])
    mapped = homog @ t.T
    return mapped[:, :2] / mapped[:, 2:3]


class Homography:
    """A 3x3 projective map from camera pixels to map meters."""

    def __init__(self, matrix: np.ndarray) -> None:
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (3, 3):
            raise CalibrationError(f"homography matrix must be 3x3, got {matrix.shape}")
        if abs(matrix[2, 2]) < 1e-12 * np.abs(matrix).max():
            raise CalibrationError("homography is not normalizable (vanishing scale term)")
        self.matrix = matrix / matrix[2, 2]

    @classmethod
    def identity(cls) -> "Homography":
        return cls(np.eye(3))

    def to_map_coords(self, x: float, y: float) -> tuple[float, float]:
        xp, yp, w = self.matrix @ (x, y, 1.0)
        if abs(w) < 1e-12:
            raise CalibrationError(f"pixel ({x}, {y}) maps to infinity under this calibration")
        return xp / w, yp / w

    def inverse(self) -> "Homography":
        return Homography(np.linalg.inv(self.matrix))

    def __repr__(self) -> str:
        return f"Homography({self.matrix.tolist()!r})"


def fit_homography(pixel_points: Iterable[Pair], map_points: Iterable[Pair]) -> Homography:
    """Least-squares homography from pixel/map correspondences.

    Needs at least 4 correspondences with no 3 of them collinear on
    either plane; with more than 4 the solution minimizes the algebraic
    error over the normalized coordinates.
    """
    src = np.asarray([(p[0], p[1]) for p in pixel_points], dtype=float)
    dst = np.asarray([(p[0], p[1]) for p in map_points], dtype=float)
    if src.shape != dst.shape:
        raise CalibrationError(f"correspondence count mismatch: {len(src)} pixels vs {len(dst)} map points")
    if len(src) < 4:
        raise CalibrationError(f"at least 4 correspondences required, got {len(src)}")
    if not (np.isfinite(src).all() and np.isfinite(dst).all()):
        raise CalibrationError("correspondences must be finite")

    t_src = _normalization(src)
    t_dst = _normalization(dst)
    ns = _apply3(t_src, src)
    nd = _apply3(t_dst, dst)

    rows = []
    for (x, y), (xp, yp) in zip(ns, nd):
        rows.append([0.0, 0.0, 0.0, -x, -y, -1.0, yp * x, yp * y, yp])
        rows.append([x, y, 1.0, 0.0, 0.0, 0.0, -xp * x, -xp * y, -xp])
    a = np.asarray(rows)

    _, s, vt = np.linalg.svd(a)
    # Rank < 8 means the configuration does not pin down the homography
    # (3+ collinear points or repeated correspondences).
    if s[7] < 1e-9 * s[0]:
        raise CalibrationError("degenerate correspondence configuration")
    h_norm = vt[-1].reshape(3, 3)
    matrix = np.linalg.inv(t_dst) @ h_norm @ t_src
    return Homography(matrix)


def fit_rectangle_calibration(
    pixel_corners: Sequence[Pair], width_m: float, height_m: float
) -> Homography:
    """Calibrate from the 4 map corners as seen in the camera image.

    Corners are given clockwise from the top-left of the physical map
    (NW, NE, SE, SW) and are mapped to the local frame where the SW
    corner is the origin and y grows north.
    """
    if len(pixel_corners) != 4:
        raise CalibrationError(f"expected 4 corner pixels, got {len(pixel_corners)}")
    map_corners = [
        (0.0, height_m),  # NW
        (width_m, height_m),  # NE
        (width_m, 0.0),  # SE
        (0.0, 0.0),  # SW
    ]
    return fit_homography(pixel_corners, map_corners)
