"""Single-peak two-layer embedding baseline (higher five-bit plane, 4-neighbour predictors).

It reuses the DTLE framing (scan order, header, payload sections, location
map) so comparisons isolate the embedding rule; only the location-map margin
shrinks to 1 because each layer moves a value by at most one step.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import codec
from .pixel import tle_embed_pixel, tle_extract_pixel, tle_predictors_at

__all__ = ["TleParams", "tle_predictors", "tle_embed_pixel", "tle_extract_pixel", "tle_embed", "tle_extract",
           "tle_capacity"]


@dataclass(frozen=True)
class TleParams:
    n: int = 3
    use_med: bool = False


def tle_predictors(plane, i: int, j: int) -> tuple[int, int]:
    return tle_predictors_at(plane, i, j)


def tle_embed(cover, secret, params: TleParams = TleParams()) -> codec.StegoResult:
    return codec.embed(cover, secret, n=params.n, use_med=params.use_med, scheme="tle")


def tle_extract(stego, params: TleParams = TleParams(), verify: bool = True):
    return codec.extract(stego, n=params.n, use_med=params.use_med, scheme="tle", verify=verify)


def tle_capacity(cover, params: TleParams = TleParams(), seed: int = 0) -> codec.Capacity:
    return codec.capacity(cover, n=params.n, use_med=params.use_med, scheme="tle", seed=seed)
