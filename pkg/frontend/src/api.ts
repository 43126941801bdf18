/** Typed client for the wiki engine's HTTP endpoints. */

export interface FrameState {
  response: string;
  state: number;
}

export interface FrameResult {
  id: number;
  markup: string | null;
  state: number | null;
  ok: boolean;
  advice: string[];
  response: string | null;
}

export interface EditResult {
  frames: FrameResult[];
  undos: number;
  sends: number;
  warning: boolean;
  text: string;
}

export class ApiClient {
  constructor(private base: string = '') {}

  async getState(doc: string, frame: number): Promise<FrameState> {
    const res = await fetch(`${this.base}/state/${doc}/${frame}`);
    if (!res.ok) throw new Error(`state fetch failed: ${res.status}`);
    return res.json();
  }

  async postEdit(doc: string, text: string): Promise<EditResult> {
    const res = await fetch(`${this.base}/edit/${doc}`, { method: 'POST', body: text });
    if (!res.ok) throw new Error(`edit failed: ${res.status}`);
    return res.json();
  }

  async postAdvice(goalLine: string): Promise<{ advice: string[]; warning: boolean }> {
    const res = await fetch(`${this.base}/advice`, { method: 'POST', body: goalLine });
    if (!res.ok) throw new Error(`advice failed: ${res.status}`);
    return res.json();
  }
}
