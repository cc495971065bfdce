from pathlib import Path
from typing import Mapping, Sequence

import pandas as pd


def write_table(path: Path, columns: Mapping[str, Sequence], precision: int = 17) -> Path:
    """Grava colunas numa tabela CSV com `precision` dígitos significativos.

    Valores ausentes (None / NaN) saem como campo vazio.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(dict(columns))
    frame.to_csv(path, index=False, float_format=f"%.{precision}g", na_rep="", lineterminator="\n")
    return path
