// Wire types mirroring the gateway's JSON documents.

export interface Station {
  name: string;
  ae_title: string;
  host: string;
  port: number;
}

export interface StationStatus {
  station: Station;
  reachable: boolean;
  checked_at: number;
  latency_ms: number | null;
  detail: string;
}

export interface Preferences {
  exact_match: boolean;
  connect_timeout_s: number;
  dimse_timeout_s: number;
  output_root: string;
}

export interface ActionState {
  retrieve_enabled: boolean;
  preview_enabled: boolean;
  open_enabled: boolean;
  failed_mark: boolean;
}

export interface SeriesDoc {
  series_instance_uid: string;
  modality: string;
  series_number: string;
  series_description: string;
  instance_count: number | null;
  actions: ActionState;
}

export interface StudyDoc {
  station: Station;
  study_instance_uid: string;
  study_date: string;
  study_description: string;
  patient_name: string;
  patient_id: string;
  accession_number: string;
  custom_values: Record<string, string>;
  series: SeriesDoc[];
  actions: ActionState;
}

export interface TreeDoc {
  studies: StudyDoc[];
  errors: { station: string; message: string }[];
}

export interface CustomField {
  tag: string;
  value: string;
}

export interface QueryRequest {
  station: string;
  study_date?: string;
  study_time?: string;
  study_id?: string;
  referring_physician_name?: string;
  accession_number?: string;
  study_instance_uid?: string;
  patient_id?: string;
  patient_name?: string;
  sex?: string;
  birth_date?: string;
  modality?: string;
  series_instance_uid?: string;
  series_number?: string;
  custom?: CustomField[];
}

export interface RetrieveRequest {
  scope: 'study' | 'series';
  station: string;
  study_uid: string;
  series_uid?: string;
}

export interface ReportDoc {
  scope: string;
  study_uid: string;
  series_uid: string | null;
  expected: number;
  completed: number;
  failed: number;
  success: boolean;
  output_root: string | null;
  per_series: { series_uid: string; files_written: number }[];
  error: string | null;
}

export interface JobDoc {
  id: string;
  scope: string;
  station: string;
  study_uid: string;
  series_uid: string | null;
  state: 'queued' | 'running' | 'completed' | 'failed';
  progress: { completed: number; expected: number };
  report: ReportDoc | null;
}

export interface ManifestEntry {
  instance_number: number | null;
  sop_uid: string;
  files: { lossless?: string; viewer?: string };
}

export interface SeriesManifest {
  study_uid: string;
  series_uid: string;
  entries: ManifestEntry[];
  errors: { file: string; error: string }[];
}

export interface StudyManifest {
  study_uid: string;
  series: SeriesManifest[];
}

export interface DictEntry {
  keyword: string;
  tag: string;
  vr: string;
}
