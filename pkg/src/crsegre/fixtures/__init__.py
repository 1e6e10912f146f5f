"""Bundled example manifolds (``*.cr``) and hypersurfaces (``*.hyp``)."""

from importlib import resources
from pathlib import Path


def fixture_path(name: str) -> Path:
    return Path(str(resources.files(__name__).joinpath(name)))


def load_manifold(name: str):
    from ..language import parse_manifold
    return parse_manifold(fixture_path(name).read_text())


def load_hypersurface(name: str):
    from ..language import parse_hypersurface
    return parse_hypersurface(fixture_path(name).read_text())


MANIFOLDS = ("lewy.cr", "flat.cr", "m_lambda_1.cr", "m_lambda_2.cr",
             "m_lambda_half.cr", "m_lambda_pi355.cr")
HYPERSURFACES = ("hyp_imw1.hyp", "hyp_imw1w2bar.hyp", "hyp_imw1sq.hyp",
                 "hyp_product.hyp", "sphere.hyp")
