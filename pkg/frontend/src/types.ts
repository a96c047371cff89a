// Shapes of the service API payloads the workbench consumes. All numbers
// shown in the UI come straight from these payloads; the client never
// computes chemistry.

export interface DepictionAtom {
  index: number;
  element: string;
  aromatic: boolean;
  charge: number;
  h_count: number;
  x: number;
  y: number;
}

export interface DepictionBond {
  a: number;
  b: number;
  order: number; // 1 single, 2 double, 3 triple, 4 aromatic
}

export interface Depiction {
  atoms: DepictionAtom[];
  bonds: DepictionBond[];
}

export type PropertyMap = Record<string, number>;

export interface ModificationResult {
  input_smiles: string;
  output_smiles: string;
  valid: boolean;
  canonical: string | null;
  error: string | null;
  input_properties: PropertyMap;
  output_properties: PropertyMap;
  deltas: PropertyMap;
}

export interface ModifyResponse {
  turn_index: number;
  result: ModificationResult;
  input_depiction: Depiction;
  output_depiction: Depiction | null;
  history_length: number;
}

export interface AcceptResponse {
  turn: number;
  accepted: boolean;
  pool_size: number;
}

export interface PoolEntry {
  smiles: string;
  properties: PropertyMap;
}

export interface IterationReport {
  iteration: number;
  cutoff: number;
  generated: number;
  valid: number;
  unique: number;
  novel: number;
  accepted: number;
  context_size: number;
  prediction_summary: {
    min?: number;
    q1?: number;
    median?: number;
    q3?: number;
    max?: number;
  };
  condition_pass_rates: Record<string, number>;
  internal_diversity: number;
  frechet_to_lead: number | null;
}

export interface CampaignInfo {
  id: string;
  status: string;
  dataset: string;
  reports: IterationReport[];
  context_size: number;
}
