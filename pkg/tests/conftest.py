import pytest

from nielsenkit.graphs import EdgePath, Graph, GraphMap, parse_dart, trivial_path
from nielsenkit.words import Basis, Endomorphism, default_basis


def rose(images: dict[str, list[str]]) -> GraphMap:
    """Rose selfmap from dart-string images, e.g. {"a": ["a-", "b"]}."""
    g = Graph(("*",), {e: ("*", "*") for e in images})
    emap = {}
    for e, toks in images.items():
        if not toks:
            emap[e] = trivial_path("*")
        else:
            emap[e] = EdgePath(tuple(parse_dart(t) for t in toks))
    f = GraphMap(g, {"*": "*"}, emap)
    f.validate()
    return f


def endo(rank: int, *images: str) -> Endomorphism:
    b = default_basis(rank)
    return Endomorphism(b, tuple(b.parse(s) for s in images))


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    from nielsenkit.io import emit_corpus

    target = tmp_path_factory.mktemp("corpus")
    emit_corpus(target)
    return target
