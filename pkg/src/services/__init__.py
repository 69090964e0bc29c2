"""
Services - Camada de lógica do domínio
MÓDULOS:
    - annotation_service: esquema de landmarks, leitura e escrita de anotações
    - heatmap_service: codificação gaussiana e decodificação (argmax, soft-argmax)
    - geometry_service: ajuste de retas e perda geométrica
    - loss_service: perda total e gradiente nos logits
    - metrics_service: MRE, SDR e resíduo geométrico
    - synth_service: gerador sintético semeado
    - report_service: consolidação de execuções
    - training: agenda, AdamW, LoRA, treinador, gradcheck e experimentos
    - models: modelos de heatmap treináveis
"""
