__all__ = ['model', 'fock_model', 'errors']