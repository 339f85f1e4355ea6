__all__ = ['controller']