import sys
import logging
from typing import Optional, Union

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(
    name: str,
    level: Union[int, str] = logging.INFO,
    log_format: Optional[str] = None,
    log_file: Optional[str] = None
) -> logging.Logger:
    """
    Configura un logger para la librería o la CLI.

    La salida de consola va a stderr: stdout queda reservado para los CSV
    que emiten los subcomandos.

    Args:
        name: Nombre del logger (normalmente "src" para todo el paquete)
        level: Nivel de logging, entero o nombre ("INFO", "DEBUG", ...)
        log_format: Formato personalizado (opcional)
        log_file: Ruta a un archivo de log (opcional)

    Returns:
        Logger configurado
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Evitar handlers duplicados si la CLI se invoca varias veces en el mismo proceso
    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(level)
            if type(handler) is logging.StreamHandler:
                handler.setStream(sys.stderr)
        return logger

    formatter = logging.Formatter(log_format or DEFAULT_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Obtiene el logger de un módulo.

    Los módulos de `src` no agregan handlers propios: propagan al logger
    "src", que configura la CLI con `setup_logger`.
    """
    return logging.getLogger(name)
