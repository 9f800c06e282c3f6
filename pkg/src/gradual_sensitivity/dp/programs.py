"""Source templates for the gradual Laplace and above-threshold mechanisms.

The language has no type polymorphism, so the database type ``$T`` is
substituted textually before parsing. The drivers leave ``db``, ``eps`` and
``thr`` free: mechanisms elaborate a driver once and bind those names per run.

Example:

    from gradual_sensitivity.dp.programs import glm_driver, query_source

    source = glm_driver(query_source("v + v"))
"""
from __future__ import annotations

from string import Template
from typing import Sequence

DATABASE = "db"
DEFAULT_DB_TYPE = "Number"

GLM_TEMPLATE = Template(
    """\
def glm(res x: $T, f: $T[1x] -> Number[?x], eps: Number) =
  laplace(f(x) :: Number[1x], 1, eps);
"""
)

GAT_TEMPLATE = Template(
    """\
def gat(res db: $T, fs: List<$T[1db] -> Number[?db]>, thr: Number, eps: Number): Number = {
  let noisyThr = laplace(thr, 1, eps / 2);
  fs.indexOf(fn (f: $T[1db] -> Number[?db]) =>
    try {
      let noisyVal = glm(db, f, eps / 4);
      noisyVal >= noisyThr;
    } catch { false })
};
"""
)


def glm_source(db_type: str = DEFAULT_DB_TYPE) -> str:
    return GLM_TEMPLATE.substitute(T=db_type)


def gat_source(db_type: str = DEFAULT_DB_TYPE) -> str:
    """The above-threshold definition, preceded by the ``glm`` it calls."""
    return glm_source(db_type) + GAT_TEMPLATE.substitute(T=db_type)


def query_source(body: str, *, param: str = "v", db_type: str = DEFAULT_DB_TYPE) -> str:
    """A query lambda over the database: ``fn (v: T[db]) => body``."""
    return f"fn ({param}: {db_type}[{DATABASE}]) => {body}"


def query_element_type(db_type: str = DEFAULT_DB_TYPE) -> str:
    return f"{db_type}[1{DATABASE}] -> Number[?{DATABASE}]"


def glm_driver(query: str, db_type: str = DEFAULT_DB_TYPE) -> str:
    """Apply ``glm`` to the free ``db`` and ``eps`` with a query written as source."""
    return glm_source(db_type) + f"glm({DATABASE}, {query}, eps)\n"


def gat_driver(queries: Sequence[str], db_type: str = DEFAULT_DB_TYPE) -> str:
    """Apply ``gat`` to the free ``db``, ``thr`` and ``eps``.

    Queries are listed at the element type ``T[1db] -> Number[?db]`` so each
    keeps its own monitored sensitivity instead of the join of all of them.
    """
    elements = ", ".join(queries)
    listed = f"List<{query_element_type(db_type)}>({elements})"
    return gat_source(db_type) + f"gat({DATABASE}, {listed}, thr, eps)\n"
