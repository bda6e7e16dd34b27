// Job polling stops at terminal states; no timers outlive the poll.

import { describe, expect, it } from 'vitest';

import { pollJob } from '../src/state';
import { jobDoc, scriptedClient } from './helpers';

describe('pollJob', () => {
  it('polls until completed, then stops cleanly', async () => {
    const states = [jobDoc('queued', 0, 0), jobDoc('running', 2, 5),
                    jobDoc('completed', 5, 5)];
    let fetches = 0;
    const sleeps: number[] = [];
    const client = scriptedClient({
      job: async () => {
        fetches += 1;
        return states[Math.min(fetches - 1, states.length - 1)];
      },
    });
    const updates: string[] = [];
    const job = await pollJob(client, 'job-1', {
      intervalMs: 1000,
      onUpdate: (j) => updates.push(j.state),
      sleep: async (ms) => { sleeps.push(ms); },
    });
    expect(job.state).toBe('completed');
    expect(updates).toEqual(['queued', 'running', 'completed']);
    expect(fetches).toBe(3);
    // Two sleeps between three fetches, at the configured interval; none after.
    expect(sleeps).toEqual([1000, 1000]);
  });

  it('stops on failed state too', async () => {
    let fetches = 0;
    const client = scriptedClient({
      job: async () => {
        fetches += 1;
        return jobDoc('failed', 4, 5);
      },
    });
    const job = await pollJob(client, 'job-1', { sleep: async () => {} });
    expect(job.state).toBe('failed');
    expect(fetches).toBe(1);
  });
});
