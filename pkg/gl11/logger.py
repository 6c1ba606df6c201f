import logging

ROOT = "gl11"

logging.basicConfig(
    level=logging.WARNING, format="%(asctime)s [%(levelname)s] %(name)s: %(message)s"
)
logging.getLogger(ROOT).setLevel(logging.INFO)


def getLogger(name: str) -> logging.Logger:
    # scripts run with -m log under the package logger too
    if name == "__main__":
        name = f"{ROOT}.cli"
    return logging.getLogger(name)


def setLevel(level: int) -> None:
    logging.getLogger(ROOT).setLevel(level)
