/** JSON shapes returned by the composition service. */

export interface EvaluationReport {
  best_key?: string;
  key_confidence?: number;
  average_interval?: number;
  step_ratio?: number;
  direction_change_rate?: number;
  rhythm_match?: number;
  rhythm_match_keywords?: number;
}

export interface SongLinks {
  musicxml: string;
  midi: string;
}

export interface SongRecord {
  id: string;
  created_at: string;
  input_kind: "lyrics" | "image";
  title: string;
  lyrics: string;
  key: string;
  time_signature: string;
  seed: number;
  instrument: number;
  output: "song" | "music";
  report: EvaluationReport;
  rating: number | null;
  links: SongLinks;
}

export interface SongListing {
  total: number;
  limit: number;
  offset: number;
  items: SongRecord[];
}

export interface GenerateRequest {
  lyrics?: string;
  image_base64?: string;
  key: string;
  output: "song" | "music";
  instrument?: number;
  seed?: number;
  length_preference?: "short" | "medium" | "long";
}
