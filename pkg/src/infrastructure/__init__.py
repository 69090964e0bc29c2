"""
Camada de Infraestrutura
DESCRIÇÃO: Logging, métricas de sessão e armazenamento de artefatos
"""
