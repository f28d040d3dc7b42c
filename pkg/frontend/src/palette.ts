/** Fixed entity-type color palette; keyed by type so tests can assert on
 * style attributes, with a visible legend rendered from the same table. */

export const ENTITY_COLORS: Record<string, string> = {
  PER: "#f28cb1",
  ORG: "#8ecae6",
  FAC: "#f4a261",
  LOC: "#b5e48c",
  GPE: "#80ed99",
  VEH: "#ffd166",
  WEA: "#c9ada7",
};

export const FALLBACK_COLOR = "#d3d3d3";

export function entityColor(entityType: string): string {
  return ENTITY_COLORS[entityType] ?? FALLBACK_COLOR;
}
