# vim: ai:sw=4:ts=4:sta:et:fo=croql
"""Shared constants. Default values for creating an attributes class are used as::

import attrs

@attrs.define(**const.ATTRS_DEFAULTS)
class MyAttrs: pass
"""
import re
from typing import Dict

############
#  Common  #
############

ENCODING_UTF8: str = "UTF-8"
REPORT_SCHEMA_VERSION: str = "1.0.0"
DECIMAL_SIGNIFICANT_DIGITS: int = 12


###########
#  ATTRS  #
###########

ATTRS_DEFAULTS: Dict[str, bool] = dict(
    kw_only=True,
    str=True,
    repr=True,
    eq=True,
    hash=True,
    frozen=True,
    slots=True,
)

##########
#  Caps  #
##########

DEFAULT_MAX_EDGES: int = 20
"""Largest edge count accepted by exact (dense table) enumeration."""
DEFAULT_MAX_PA_VERTICES: int = 4
"""Largest coordinate count for the all-pairs up-set association check (168 up-sets)."""
HARD_MAX_PA_VERTICES: int = 5
"""Ceiling for :py:data:`DEFAULT_MAX_PA_VERTICES`, 7581 up-sets."""
DEFAULT_MAX_JOINT_BITS: int = 24
"""Cap on ``|E| + |V| * log2(|colors|)`` for joint edge/spin tables."""

MAX_EDGES_ENV_VAR_NAME: str = "FUZZY_POTTS_MAX_EDGES"
MAX_PA_VERTICES_ENV_VAR_NAME: str = "FUZZY_POTTS_MAX_PA_VERTICES"
MAX_JOINT_BITS_ENV_VAR_NAME: str = "FUZZY_POTTS_MAX_JOINT_BITS"

#####################
#  Text validation  #
#####################

RATIONAL_REGEX: re.Pattern = re.compile(pattern=r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")
"""
Input example::
    3/2
Groups on matching are::
    numerator, denominator = RATIONAL_REGEX.match(line).groups()
    # "3", "2"
The denominator group is :py:obj:`None` for plain integers. Decimal points and exponents never match.
"""

GRAPH_HEADER_REGEX: re.Pattern = re.compile(pattern=r"^vertices\s+(\d+)$", flags=re.IGNORECASE)
"""
Input example::
    vertices 4
Groups on matching are::
    (vertex_count,) = GRAPH_HEADER_REGEX.match(line).groups()
"""

GRAPH_EDGE_REGEX: re.Pattern = re.compile(pattern=r"^(\d+)\s+(\d+)$")
"""
Input example::
    0 3
Groups on matching are::
    endpoint_a, endpoint_b = GRAPH_EDGE_REGEX.match(line).groups()
"""
