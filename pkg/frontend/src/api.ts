/** Thin typed client for the composition service. All UI traffic goes
 * through here; nothing else in the app touches the network. */

import type { GenerateRequest, SongListing, SongRecord } from "./types";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init)
  ) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.url(path), init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  generate(request: GenerateRequest): Promise<SongRecord> {
    return this.json<SongRecord>("/generate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
  }

  listSongs(limit = 20, offset = 0): Promise<SongListing> {
    return this.json<SongListing>(`/songs?limit=${limit}&offset=${offset}`);
  }

  getSong(id: string): Promise<SongRecord> {
    return this.json<SongRecord>(`/songs/${encodeURIComponent(id)}`);
  }

  rate(id: string, stars: number): Promise<SongRecord> {
    return this.json<SongRecord>(`/songs/${encodeURIComponent(id)}/rating`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ stars }),
    });
  }

  async fetchBytes(path: string): Promise<Uint8Array> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.url(path));
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) throw new ApiError(response.status, `${response.status}`);
    return new Uint8Array(await response.arrayBuffer());
  }

  async fetchText(path: string): Promise<string> {
    const bytes = await this.fetchBytes(path);
    return new TextDecoder("utf-8").decode(bytes);
  }
}

export const api = new ApiClient("");
