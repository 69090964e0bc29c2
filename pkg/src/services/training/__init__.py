"""
Treinamento em escala de bancada: agenda de lr, AdamW, LoRA, treinador, gradcheck e experimentos
"""
