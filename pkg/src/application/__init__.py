"""
Camada de Aplicação
DESCRIÇÃO: Relatórios que os comandos montam a partir dos services e gravam como CSV
"""
