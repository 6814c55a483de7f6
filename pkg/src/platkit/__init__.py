"""platkit: plat presentations of links, their moves, and exact certification."""

from .braid import (
    BraidWord,
    Letter,
    Permutation,
    artin_action,
    braids_equal,
    free_reduce,
    full_twist,
    parse_word,
    permutation_of,
)
from .errors import (
    BudgetError,
    OracleMismatchError,
    ParseError,
    PlatkitError,
    ReplayError,
    ResourceLimitError,
)
from .foliation import (
    ReductionStep,
    Tile,
    TileGraph,
    complexity,
    find_removable,
    random_tiling,
    reduce_to_standard,
    remove_pair,
    remove_punctured_adjacent,
    standard_punctured,
    standard_sphere,
    tiling_from_json,
    tiling_to_json,
    unnest,
    validate,
)
from .invariants import (
    InvariantValue,
    LaurentPolynomial,
    invariant,
    invariants_equal,
    kauffman_bracket,
    writhe,
)
from .moves import (
    HildenWord,
    MoveLog,
    MoveRecord,
    apply_double_coset,
    apply_flip,
    apply_record,
    cap_twist,
    flip_insertion,
    garside_slide,
    hilden_generators,
    micro_flip,
    pocket_move,
    special_configuration,
)
from .plat import (
    LinkDiagram,
    PlatPresentation,
    component_count,
    destabilize,
    is_composite_word,
    is_split_word,
    pd_text,
    plat_closure_diagram,
    plat_from_json,
    plat_to_json,
    stabilize,
)
from .render import RenderSpec, render_svg
from .simplify import (
    SearchBudget,
    SimplifyResult,
    obscure,
    score_composite,
    score_split,
    simplify_composite,
    simplify_split,
    verify_log,
)

__version__ = "0.1.0"
