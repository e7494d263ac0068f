from .app import app, create_app
from .mockllm import create_mockllm_app

__all__ = ["app", "create_app", "create_mockllm_app"]
