"""
Controllers - Subcomandos da CLI
"""
