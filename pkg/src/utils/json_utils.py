"""
Utilidades para serialización JSON
Maneja tipos de numpy y pydantic que no son JSON-compliant
"""
import json
from pathlib import Path
from typing import Any
import numpy as np
from pydantic import BaseModel


def clean_for_json(data: Any) -> Any:
    """
    Limpia datos para que sean serializables a JSON

    Maneja:
    - NaN, Infinity → None
    - numpy arrays y escalares → tipos Python nativos
    - modelos pydantic → dict
    - Path → string

    Args:
        data: Cualquier tipo de dato (dict, list, array, modelo, valor simple)

    Returns:
        Datos limpios serializables a JSON
    """
    if data is None:
        return None

    if isinstance(data, BaseModel):
        return clean_for_json(data.model_dump())

    elif isinstance(data, np.ndarray):
        return clean_for_json(data.tolist())

    elif isinstance(data, (np.bool_, bool)):
        return bool(data)

    elif isinstance(data, (np.integer, np.floating)):
        return clean_for_json(data.item())

    elif isinstance(data, dict):
        return {str(key): clean_for_json(value) for key, value in data.items()}

    elif isinstance(data, (list, tuple)):
        return [clean_for_json(item) for item in data]

    elif isinstance(data, float):
        if np.isnan(data) or np.isinf(data):
            return None
        return data

    elif isinstance(data, (int, str)):
        return data

    elif isinstance(data, Path):
        return str(data)

    try:
        json.dumps(data)
        return data
    except (TypeError, ValueError):
        return str(data)
