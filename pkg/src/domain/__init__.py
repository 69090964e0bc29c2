"""
Camada de Domínio
DESCRIÇÃO: Tipos centrais do toolkit de landmarks
COMPONENTES:
    - entities: LandmarkSet, AnnotationRecord, LineGroupSchema, HeatmapStack
    - value_objects: LandmarkId, LossMode, HeatmapRole, UnitDirection, GeoLossValue
"""
