// Typed client for the gateway HTTP/JSON API.

import type {
  DictEntry,
  JobDoc,
  Preferences,
  QueryRequest,
  RetrieveRequest,
  SeriesManifest,
  Station,
  StationStatus,
  StudyManifest,
  TreeDoc,
} from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: unknown = null,
  ) {
    super(message);
  }
}

export type FetchFn = typeof fetch;

export interface LoginResult {
  token: string;
  username: string;
  role: string;
  expires_at: number;
}

export class GatewayClient {
  token: string | null = null;

  constructor(
    public baseUrl: string,
    private fetchFn: FetchFn = (...args) => fetch(...args),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers['Content-Type'] = 'application/json';
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = 'http_error';
      let message = `${response.status} ${response.statusText}`;
      let detail: unknown = null;
      try {
        const doc = await response.json();
        code = doc.code ?? code;
        message = doc.message ?? message;
        detail = doc.detail ?? null;
      } catch {
        // non-JSON error body; keep the HTTP status text
      }
      throw new ApiError(response.status, code, message, detail);
    }
    return response.json() as Promise<T>;
  }

  async login(username: string, password: string): Promise<LoginResult> {
    const result = await this.request<LoginResult>('POST', '/login', { username, password });
    this.token = result.token;
    return result;
  }

  createUser(username: string, password: string, role = 'user') {
    return this.request<{ username: string; role: string }>('POST', '/users', {
      username,
      password,
      role,
    });
  }

  stations() {
    return this.request<{ stations: Station[] }>('GET', '/stations');
  }

  addStation(station: Station) {
    return this.request<Station>('POST', '/stations', station);
  }

  removeStation(name: string) {
    return this.request<{ removed: string }>(
      'DELETE',
      `/stations?name=${encodeURIComponent(name)}`,
    );
  }

  verifyStations(station = 'all') {
    return this.request<{ statuses: StationStatus[] }>('POST', '/stations/verify', { station });
  }

  getPreferences() {
    return this.request<Preferences>('GET', '/preferences');
  }

  putPreferences(preferences: Preferences) {
    return this.request<Preferences>('PUT', '/preferences', preferences);
  }

  query(body: QueryRequest) {
    return this.request<TreeDoc>('POST', '/query', body);
  }

  retrieve(body: RetrieveRequest) {
    return this.request<{ job_id: string }>('POST', '/retrieve', body);
  }

  job(id: string) {
    return this.request<JobDoc>('GET', `/jobs/${id}`);
  }

  studyPreviews(studyUid: string) {
    return this.request<StudyManifest>('GET', `/previews/${studyUid}`);
  }

  seriesPreviews(studyUid: string, seriesUid: string) {
    return this.request<SeriesManifest>('GET', `/previews/${studyUid}/${seriesUid}`);
  }

  imageUrl(studyUid: string, seriesUid: string, name: string): string {
    return `${this.baseUrl}/previews/${studyUid}/${seriesUid}/${name}`;
  }

  async fetchImage(studyUid: string, seriesUid: string, name: string): Promise<Blob> {
    const headers: Record<string, string> = {};
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    const response = await this.fetchFn(this.imageUrl(studyUid, seriesUid, name), { headers });
    if (!response.ok) throw new ApiError(response.status, 'http_error', 'image fetch failed');
    return response.blob();
  }

  dictionary(q: string) {
    return this.request<{ entries: DictEntry[] }>(
      'GET',
      `/dictionary?q=${encodeURIComponent(q)}`,
    );
  }

  health() {
    return this.request<{ status: string }>('GET', '/health');
  }
}
