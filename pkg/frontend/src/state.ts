// Per-node action state and retrieve-job polling.
//
// The state machine per tree node:
//   idle     -> Retrieve enabled, Preview/Open disabled
//   running  -> Retrieve disabled
//   success  -> Retrieve disabled, Preview/Open enabled
//   failure  -> Retrieve re-enabled, cross-mark shown

import type { GatewayClient } from './api';
import type { ActionState, JobDoc, TreeDoc } from './types';

export type NodeKey = string;

export function nodeKey(station: string, studyUid: string, seriesUid?: string | null): NodeKey {
  return `${station}|${studyUid}|${seriesUid ?? ''}`;
}

export function idleActions(): ActionState {
  return {
    retrieve_enabled: true,
    preview_enabled: false,
    open_enabled: false,
    failed_mark: false,
  };
}

type Listener = () => void;

export class ActionStateStore {
  private states = new Map<NodeKey, ActionState>();
  private listeners = new Set<Listener>();

  /** Adopt the server-computed action booleans of a query response. */
  seed(tree: TreeDoc): void {
    for (const study of tree.studies) {
      const station = study.station.name;
      this.states.set(nodeKey(station, study.study_instance_uid), { ...study.actions });
      for (const series of study.series) {
        this.states.set(
          nodeKey(station, study.study_instance_uid, series.series_instance_uid),
          { ...series.actions },
        );
      }
    }
    this.emit();
  }

  get(key: NodeKey): ActionState {
    return this.states.get(key) ?? idleActions();
  }

  retrieveStarted(key: NodeKey): void {
    this.patch(key, { retrieve_enabled: false });
  }

  /** seriesKeys: series nodes covered by a successful study retrieval. */
  retrieveSucceeded(key: NodeKey, seriesKeys: NodeKey[] = []): void {
    for (const k of [key, ...seriesKeys]) {
      this.patch(k, {
        retrieve_enabled: false,
        preview_enabled: true,
        open_enabled: true,
        failed_mark: false,
      });
    }
  }

  retrieveFailed(key: NodeKey): void {
    this.patch(key, { retrieve_enabled: true, failed_mark: true });
  }

  private patch(key: NodeKey, change: Partial<ActionState>): void {
    this.states.set(key, { ...this.get(key), ...change });
    this.emit();
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }
}

export type SleepFn = (ms: number) => Promise<void>;

const defaultSleep: SleepFn = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

export interface PollOptions {
  intervalMs?: number;
  onUpdate?: (job: JobDoc) => void;
  sleep?: SleepFn;
}

/** Poll a job once per interval until it reaches a terminal state. */
export async function pollJob(
  client: GatewayClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobDoc> {
  const intervalMs = options.intervalMs ?? 1000;
  const sleep = options.sleep ?? defaultSleep;
  for (;;) {
    const job = await client.job(jobId);
    options.onUpdate?.(job);
    if (job.state === 'completed' || job.state === 'failed') {
      return job;
    }
    await sleep(intervalMs);
  }
}

/** Series-switch buttons are shown only when a study has several series. */
export function showSeriesSwitch(seriesCount: number): boolean {
  return seriesCount > 1;
}
