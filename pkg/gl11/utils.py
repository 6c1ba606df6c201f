import json
import logging
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, is_dataclass
from enum import Enum
from typing import Any, Callable, Dict, Hashable, Optional, TypeVar

import numpy as np
from tqdm import tqdm

logger = logging.getLogger(__name__)

K = TypeVar("K", bound=Hashable)
T = TypeVar("T")

SIGNIFICANT_DIGITS = 12


def _format_real(x: float) -> str:
    if x == 0.0:
        return "0"
    return f"{x:.{SIGNIFICANT_DIGITS}g}"


def format_complex(z: Optional[complex]) -> str:
    """`re+imi` with 12 significant digits; `inf` for the root at infinity."""
    if z is None or (isinstance(z, float) and math.isinf(z)):
        return "inf"
    z = complex(z)
    if math.isinf(z.real) or math.isinf(z.imag):
        return "inf"
    scale = max(abs(z.real), abs(z.imag))
    re = 0.0 if abs(z.real) <= 1e-14 * max(scale, 1.0) else z.real
    im = 0.0 if abs(z.imag) <= 1e-14 * max(scale, 1.0) else z.imag
    re_s = _format_real(re + 0.0)
    im_s = _format_real(abs(im))
    sign = "-" if im < 0 else "+"
    return f"{re_s}{sign}{im_s}i"


def parse_complex(value: Any) -> complex:
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return complex(value)
    s = str(value).strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s.endswith("i"):
        s = s[:-1] + "j"
    return complex(s)


def dataclass_to_clean_dict(obj: Any) -> Any:
    if is_dataclass(obj) and not isinstance(obj, type):
        obj = asdict(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, complex):
        return format_complex(obj)
    if isinstance(obj, np.generic):
        return dataclass_to_clean_dict(obj.item())
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return str(obj)
    if isinstance(obj, dict):
        return {k: dataclass_to_clean_dict(v) for k, v in obj.items() if v is not None}
    if isinstance(obj, (list, tuple)):
        return [dataclass_to_clean_dict(v) for v in obj if v is not None]
    return obj


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def to_json(data: Any) -> str:
    return (
        json.dumps(
            dataclass_to_clean_dict(data),
            ensure_ascii=False,
            indent=4,
            sort_keys=True,
        )
        + "\n"
    )


def save_to_json(path: str, data: Any) -> None:
    atomic_write_text(path, to_json(data))


def fan_out(tasks: Dict[K, Callable[[], T]], desc: str, max_workers: int = 8) -> Dict[K, T]:
    """Run independent tasks on a thread pool; results are keyed, not ordered."""
    results: Dict[K, T] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_key = {executor.submit(task): key for key, task in tasks.items()}
        for future in tqdm(
            as_completed(future_to_key),
            total=len(future_to_key),
            desc=desc,
            disable=len(future_to_key) < 2,
        ):
            key = future_to_key[future]
            try:
                results[key] = future.result()
            except Exception as exc:
                logger.error(f"task {key} generated an exception: {exc}")
                raise
    return results
