"""
Loading of the seed corpus and pool files from disk.

Pool files hold one formula per top-level S-expression; ``;`` starts a comment.
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

from services.sexpr import parse_formulas
from services.syntax import Formula, is_sentence
from utils.config import load_config
from utils.errors import OpenFormulaError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_pool(path: PathLike) -> List[Formula]:
    """
    Read a pool of sentences.

    Raises:
        FileNotFoundError: the file does not exist
        ParseError: the file is not a sequence of formulas
        OpenFormulaError: a formula has free variables
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Pool file not found: {path}")

    formulas = parse_formulas(path.read_text(encoding="utf-8"))
    for i, formula in enumerate(formulas):
        if not is_sentence(formula):
            raise OpenFormulaError(f"{path.name}: formula {i} is not a sentence")

    logger.info(f"Loaded {len(formulas)} sentences from {path}")
    return formulas


def load_seed_corpus(path: Optional[PathLike] = None) -> List[Formula]:
    """The decidable seed corpus; the path defaults to the configured one."""
    if path is None:
        path = load_config().seed_corpus_path
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Seed corpus not found: {path}")
    return load_pool(path)
